"""Print the verdict tables for the Poly and Log weight families.

    python3 demos/verdict_tables.py
"""

from stablefi import ClassifyOptions, Weight, classify

COLUMNS = ("poincare", "super_poincare", "logsobolev", "nash:4", "interpolation:0.5")
SHORT = {"HOLDS": "+", "FAILS": "-", "INCONCLUSIVE": "?"}


def table(family, alpha, gammas):
    print(f"\n{family} weight, alpha = {alpha}")
    print("gamma   " + "  ".join(f"{c:>17}" for c in COLUMNS))
    for g in gammas:
        w = Weight.poly(alpha, g) if family == "poly" else Weight.log(alpha, g)
        rep = classify(alpha, w, ClassifyOptions(eps=(4.0,), xis=(0.5,), bounds=False))
        cells = "  ".join(f"{SHORT[rep.verdict(c).value]:>17}" for c in COLUMNS)
        print(f"{g:6.3f}  {cells}")


if __name__ == "__main__":
    for a in (1.2, 1.5, 1.8):
        table("poly", a, (0.8, 1.0, 1.2, 4 / 3, 1.5, 2.0))
    for a in (1.5,):
        table("log", a, (-1.0, 0.0, 0.3, 0.5, 1.0, 2.0))
