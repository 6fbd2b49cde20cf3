"""Shared curve fixtures for the test suite.

Models with a paper-stated equation are written down directly; the rest are
loaded from the frozen fixture CSV produced by scripts/find_curve_models.py.
"""

from g2image.arith import IntPoly
from g2image.frobenius import CurveModel

# smallest-conductor typical curve: y^2 + (x^3+1) y = x^2 + x
CURVE_249 = CurveModel(
    f=IntPoly([0, 1, 1]),
    h=IntPoly([1, 0, 0, 1]),
    conductor=249,
    label="249.a.249.1",
)

# showcase curve with a 31-isogeny: y^2 + (x+1) y = x^5 + 23x^4 - 48x^3 + 85x^2 - 69x + 45
CURVE_47089 = CurveModel(
    f=IntPoly([45, -69, 85, -48, 23, 1]),
    h=IntPoly([1, 1]),
    conductor=47089,
    label="47089.a.47089.1",
)

# y^2 + y = x^5, Jacobian with geometric CM by Z[zeta_5]
CURVE_3125 = CurveModel(
    f=IntPoly([0, 0, 0, 0, 0, 1]),
    h=IntPoly([1]),
    conductor=3125,
    label="3125.a.3125.1",
)

# X_1(13): y^2 + (x^3+x+1) y = x^5 + x^4, Jacobian with CM by Z[zeta_3] over Q
CURVE_169 = CurveModel(
    f=IntPoly([0, 0, 0, 0, 1, 1]),
    h=IntPoly([1, 1, 0, 1]),
    conductor=169,
    label="169.a.169.1",
)

FIXTURE_CURVES = [CURVE_249, CURVE_47089, CURVE_3125, CURVE_169]

_FIXTURE_CSV = __file__.rsplit("/", 1)[0] + "/fixtures/curves.csv"


def load_fixture_curve(label: str) -> CurveModel:
    """Curve recovered by scripts/find_curve_models.py and frozen in the
    fixture CSV; raises KeyError when the label is not frozen."""
    from g2image.cli import parse_curve_record

    with open(_FIXTURE_CSV) as fh:
        for line in fh:
            line = line.strip()
            if line and line.split(",")[0] == label:
                return parse_curve_record(line)
    raise KeyError(f"{label} not in {_FIXTURE_CSV}")
