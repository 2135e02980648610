"""Writes the golden datasets in tests/data from exact fractions.

Run: python3 tests/oracles/make_fixtures.py
"""
import json
import os
from fractions import Fraction as F

from lam_oracle import X4, all_menus, lam, luce

HERE = os.path.dirname(os.path.abspath(__file__))
DATA = os.path.join(HERE, "..", "data")


def menu_key(order, m):
    return [order.index(a) for a in sorted(m, key=order.index)]


def write(name, order, table, header_comment):
    lines = ["# " + header_comment, "universe," + ",".join(order), "mode,probabilities",
             "menu,alternative,value"]
    for m in sorted(table, key=lambda m: menu_key(order, m)):
        members = sorted(m, key=order.index)
        for a in members:
            lines.append(";".join(members) + "," + a + "," + str(table[m][a]))
    with open(os.path.join(DATA, name), "w") as f:
        f.write("\n".join(lines) + "\n")


def write_params(name, order, u, v, alpha):
    doc = {"universe": order, "anchor": order[0],
           "u": {a: str(u[a]) for a in order}, "v": {a: str(v[a]) for a in order},
           "alpha": str(alpha)}
    with open(os.path.join(DATA, name), "w") as f:
        json.dump(doc, f, indent=2)
        f.write("\n")


def main():
    os.makedirs(DATA, exist_ok=True)
    x3 = ["x", "y", "z"]
    u1 = {"x": F(1), "y": F(2, 3), "z": F(1, 3)}
    v1 = {"x": F(1), "y": F(2), "z": F(3)}
    menus3 = all_menus(x3)
    write("lab3_ai.csv", x3, {m: lam(u1, v1, F(1, 2), m) for m in menus3}, "three-alternative laboratory pair, AI")
    write("lab3_human.csv", x3, {m: luce(u1, m) for m in menus3}, "three-alternative laboratory pair, human")
    write("lab3_autonomous.csv", x3, {m: luce(v1, m) for m in menus3}, "autonomous AI rule")
    write_params("lab3_params.json", x3, u1, v1, F(1, 2))

    u2 = dict(zip(X4, [F(1), F(2), F(4), F(5)]))
    v2 = dict(zip(X4, [F(1), F(4, 5), F(2, 5), F(1, 5)]))
    menus4 = all_menus(X4)
    write("field4_ai.csv", X4, {m: lam(u2, v2, F(3, 4), m) for m in menus4}, "four-alternative field data")
    write("luce4.csv", X4, {m: luce(u2, m) for m in menus4}, "a Luce rule on four alternatives")
    write_params("field4_params.json", X4, u2, v2, F(3, 4))


if __name__ == "__main__":
    main()
