"""Regenerate frozen.json from the independent oracles.

    python3 tests/oracles/build_frozen.py
"""
import json
import os
import sys
from fractions import Fraction

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from oracles import exact  # noqa: E402

GRID = (Fraction(1, 4), Fraction(1, 2), Fraction(3, 4))
BIG_N = 10 ** 7


def main():
    out = {}
    m, w = exact.labelled_tree_profile(BIG_N)
    disc = {}
    cont = {}
    comp = {}
    for s in GRID:
        for t in GRID:
            if s > t:
                continue
            key = f"{float(s)},{float(t)}"
            j, k = int(s * BIG_N), int(t * BIG_N)
            disc[key] = float(exact.edge_cov_discrete(BIG_N, m, w, j, k) / BIG_N)
            cont[key] = float(exact.edge_cov_continuous(BIG_N, m, w, s, t) / BIG_N)
            comp[key] = float(exact.component_cov_continuous_forest(BIG_N, m, w, s, t) / BIG_N)
    out["labelled_tree_edges_discrete_limit"] = disc
    out["labelled_tree_edges_continuous_limit"] = cont
    out["labelled_tree_components_continuous_limit"] = comp

    # path P5: degrees 1,2,2,2,1 -> wedge sum 6
    p5 = [(1, 2), (2, 3), (3, 4), (4, 5)]
    out["p5_cov_2_4_pairs"] = str(exact.edge_cov_discrete(5, 4, 6, 2, 4))
    out["p5_cov_2_4_enum"] = str(exact.brute_edge_cov(5, p5, 2, 4))
    out["p3_k2"] = [str(x) for x in exact.brute_edge_moments(3, [(1, 2), (2, 3)], 2)]
    out["k3_k2"] = [str(x) for x in exact.brute_edge_moments(3, [(1, 2), (1, 3), (2, 3)], 2)]
    out["hom_c4_k3"] = exact.hom_c4_eig(3, [(1, 2), (1, 3), (2, 3)])
    out["hom_c4_c4"] = exact.hom_c4_eig(4, [(1, 2), (2, 3), (3, 4), (1, 4)])
    out["cond_poisson_n3"] = {",".join(map(str, k)): str(v) for k, v in exact.cond_poisson_shape_masses().items()}
    # [Q~,Q~] mean on K5 at t = 0.4: 36 T(1) t^3/(1-t)^3 with T(1) = 10
    t = Fraction(2, 5)
    out["k5_triangle_qv_0.4"] = float(36 * 10 * t ** 3 / (1 - t) ** 3)
    path = os.path.join(os.path.dirname(os.path.abspath(__file__)), "frozen.json")
    with open(path, "w") as fh:
        json.dump(out, fh, indent=1, sort_keys=True)
        fh.write("\n")


if __name__ == "__main__":
    main()
