"""
Mass relations between the charged leptons and the nucleons.

Values are exact rationals parsed from the decimal strings of the constants file.
Uncertainties are carried as exact variances; the square root is taken only when a
sigma is displayed or compared.
"""
import logging
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

import mpmath
from pydantic import ValidationError

from app.core.config import settings
from app.core.exceptions import FixtureError, MissingConstantError, UnitMismatchError
from app.models.schemas import ConstantsFile
from app.services.fixture_loader import resolve_path
from app.utils.helpers import ContentHasher, DecimalFormatter

logger = logging.getLogger(__name__)

DIMENSIONLESS = "1"
MASS_UNIT = "MeV/c^2"
REQUIRED = ("m_e", "m_mu", "m_p", "m_n", "m_tau", "d", "theta")
SIN_DIGITS = 30


def parse_exact(text: str) -> Fraction:
    """'939.5654133' or a ratio of decimals such as '1/365.26'."""
    text = text.strip()
    try:
        if "/" in text:
            num, den = text.split("/", 1)
            return Fraction(num.strip()) / Fraction(den.strip())
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as e:
        raise FixtureError(f"cannot read {text!r} as an exact decimal: {str(e)}")


def fraction_sqrt(value: Fraction, digits: int = 40) -> Decimal:
    with localcontext() as ctx:
        ctx.prec = digits
        return (Decimal(value.numerator) / Decimal(value.denominator)).sqrt()


@dataclass(frozen=True)
class MeasuredQuantity:
    """
    Value with a standard uncertainty; the variance is kept exact
    """
    name: str
    value: Fraction
    variance: Fraction
    unit: str

    @classmethod
    def from_strings(cls, name: str, value: str, sigma: str, unit: str) -> "MeasuredQuantity":
        s = parse_exact(sigma)
        if s < 0:
            raise FixtureError(f"{name}: negative uncertainty {sigma}")
        return cls(name, parse_exact(value), s * s, unit)

    @classmethod
    def exact(cls, name: str, value: Union[int, Fraction], unit: str = DIMENSIONLESS) -> "MeasuredQuantity":
        return cls(name, Fraction(value), Fraction(0), unit)

    @property
    def sigma(self) -> Decimal:
        return fraction_sqrt(self.variance)

    def __str__(self) -> str:
        return f"{self.name} = {DecimalFormatter.to_decimal(self.value)} +- {self.sigma:.3g} {self.unit}"


def propagate_linear(terms: Sequence[Tuple[Union[int, Fraction], MeasuredQuantity]],
                     name: str = "combination") -> MeasuredQuantity:
    """
    Linear combination sum c_i x_i with first-order uncertainty sum (c_i sigma_i)^2

    Raises:
        UnitMismatchError: terms carry different units
    """
    units = {q.unit for _, q in terms}
    if len(units) > 1:
        raise UnitMismatchError(f"cannot combine quantities in {', '.join(sorted(units))}")
    unit = units.pop() if units else DIMENSIONLESS
    value = sum((Fraction(c) * q.value for c, q in terms), Fraction(0))
    variance = sum((Fraction(c) ** 2 * q.variance for c, q in terms), Fraction(0))
    return MeasuredQuantity(name, value, variance, unit)


def ratio(a: MeasuredQuantity, b: MeasuredQuantity, name: str = "") -> MeasuredQuantity:
    """
    a/b with relative uncertainties added in quadrature

    Raises:
        UnitMismatchError: a and b carry different units
    """
    if a.unit != b.unit:
        raise UnitMismatchError(f"ratio of {a.unit} to {b.unit} is not dimensionless")
    r = a.value / b.value
    rel = (a.variance / a.value ** 2 if a.value else 0) + b.variance / b.value ** 2
    return MeasuredQuantity(name or f"{a.name}/{b.name}", r, r * r * rel, DIMENSIONLESS)


def sin_degrees(theta: Fraction, digits: int = SIN_DIGITS) -> Fraction:
    """sin of an angle in degrees, evaluated with mpmath at the given number of digits."""
    with mpmath.workdps(digits + 10):
        radians = mpmath.mpf(theta.numerator) / theta.denominator * mpmath.pi / 180
        return Fraction(Decimal(mpmath.nstr(mpmath.sin(radians), digits, strip_zeros=False)))


class ConstantsTable:
    """
    Named measured quantities read from a constants file
    """

    def __init__(self, quantities: Dict[str, MeasuredQuantity], source: str = "", content_hash: str = ""):
        self.quantities = quantities
        self.source = source
        self.content_hash = content_hash

    @classmethod
    def load(cls, path: Optional[str] = None) -> "ConstantsTable":
        """
        Raises:
            FixtureError: file missing or malformed
            MissingConstantError: a required key is absent
        """
        resolved = resolve_path(path or settings.constants_file)
        try:
            data = ConstantsFile.model_validate_json(resolved.read_text())
        except FileNotFoundError:
            raise FixtureError(f"constants file {resolved} not found")
        except ValidationError as e:
            raise FixtureError(f"constants file {resolved} is malformed: {str(e)}")
        quantities = {c.name: MeasuredQuantity.from_strings(c.name, c.value, c.sigma, c.unit) for c in data.constants}
        table = cls(quantities, data.source, ContentHasher.hash_file(resolved))
        missing = [k for k in REQUIRED if k not in quantities]
        if missing:
            raise MissingConstantError(f"constants file {resolved} lacks {', '.join(missing)}")
        logger.info(f"Loaded {len(quantities)} constants from {resolved}")
        return table

    def __contains__(self, key: str) -> bool:
        return key in self.quantities

    def get(self, key: str) -> MeasuredQuantity:
        try:
            return self.quantities[key]
        except KeyError:
            raise MissingConstantError(f"constant {key!r} is not in the table")

    def value(self, key: str) -> Fraction:
        return self.get(key).value

    def unit(self, key: str) -> str:
        return self.get(key).unit

    def precision(self, key: str) -> Optional[Decimal]:
        """Relative precision sigma/|value|, None for a zero value."""
        q = self.get(key)
        if q.value == 0:
            return None
        return q.sigma / abs(DecimalFormatter.to_decimal(q.value))

    def with_value(self, key: str, value: Union[str, Fraction]) -> "ConstantsTable":
        q = self.get(key)
        replaced = MeasuredQuantity(key, parse_exact(value) if isinstance(value, str) else value, q.variance, q.unit)
        return ConstantsTable({**self.quantities, key: replaced}, self.source, self.content_hash)

    def to_dict(self) -> List[Dict[str, Optional[str]]]:
        out = []
        for q in self.quantities.values():
            precision = self.precision(q.name)
            out.append({"name": q.name, "value": str(DecimalFormatter.to_decimal(q.value)),
                        "sigma": f"{q.sigma:.6g}", "unit": q.unit,
                        "relative_sigma": None if precision is None else f"{precision:.3g}"})
        return out


@dataclass
class Prediction:
    """
    A computed quantity compared against a target
    """
    name: str
    predicted: MeasuredQuantity
    target: Optional[MeasuredQuantity] = None
    formula: str = ""

    @property
    def difference(self) -> Optional[Fraction]:
        return None if self.target is None else self.predicted.value - self.target.value

    @property
    def z_score(self) -> Optional[Decimal]:
        """Difference over the combined uncertainty; None when both sigmas vanish."""
        if self.target is None:
            return None
        combined = self.predicted.variance + self.target.variance
        if combined == 0:
            return None
        return DecimalFormatter.to_decimal(self.difference) / fraction_sqrt(combined)

    @property
    def relative_deviation(self) -> Optional[Decimal]:
        """(predicted - target) / target; None for a zero target."""
        if self.target is None or self.target.value == 0:
            return None
        return DecimalFormatter.to_decimal(self.difference / self.target.value)

    def to_dict(self, places: int) -> Dict[str, Optional[str]]:
        z, rel = self.z_score, self.relative_deviation
        return {
            "name": self.name,
            "formula": self.formula,
            "predicted": DecimalFormatter.format_fixed(self.predicted.value, places, leading_zero=False),
            "sigma": f"{self.predicted.sigma:.3g}",
            "target": None if self.target is None
            else DecimalFormatter.format_fixed(self.target.value, places, leading_zero=False),
            "z_score": None if z is None else f"{z:.3f}",
            "relative_deviation": None if rel is None else f"{rel:.3e}",
        }


def tau_prediction(table: ConstantsTable) -> Prediction:
    """
    m(tau) = 5 m(n) - 3 m(p) - m(mu) - m(e), compared with the measured tau mass

    Raises:
        MissingConstantError: a mass is absent
        UnitMismatchError: masses in different units
    """
    predicted = propagate_linear([(5, table.get("m_n")), (-3, table.get("m_p")),
                                  (-1, table.get("m_mu")), (-1, table.get("m_e"))], name="m_tau_predicted")
    return Prediction("tau-mass", predicted, table.get("m_tau"), "m(e) + m(mu) + m(tau) + 3 m(p) = 5 m(n)")


def ratio_checks(table: ConstantsTable) -> Tuple[Prediction, Prediction]:
    """
    m(n)/m(p) against 1 + d/2 and m(e)/m(p) against (d/2) sin(theta)

    Raises:
        MissingConstantError: a constant is absent
        UnitMismatchError: d is not dimensionless or theta is not in degrees
    """
    d = table.get("d")
    theta = table.get("theta")
    if d.unit != DIMENSIONLESS:
        raise UnitMismatchError(f"d must be dimensionless, got {d.unit}")
    if theta.unit != "deg":
        raise UnitMismatchError(f"theta must be given in degrees, got {theta.unit}")
    half_d = d.value / 2
    neutron = Prediction(
        "neutron-proton",
        ratio(table.get("m_n"), table.get("m_p"), "m_n/m_p"),
        MeasuredQuantity.exact("1 + d/2", 1 + half_d),
        "m(n)/m(p) ~ 1 + d/2",
    )
    electron = Prediction(
        "electron-proton",
        ratio(table.get("m_e"), table.get("m_p"), "m_e/m_p"),
        MeasuredQuantity.exact("(d/2) sin(theta)", half_d * sin_degrees(theta.value)),
        "m(e)/m(p) ~ (d/2) sin(theta)",
    )
    logger.info(f"Ratio checks: n/p {float(neutron.predicted.value):.7f}, e/p {float(electron.predicted.value):.9f}")
    return neutron, electron
