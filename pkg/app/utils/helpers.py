from decimal import Decimal, ROUND_HALF_UP
from fractions import Fraction
from typing import Any, Union
import hashlib
import json
import logging
from pathlib import Path

from app.models.schemas import VerificationReport

logger = logging.getLogger(__name__)


class ContentHasher:
    """
    Utility class for stable content hashes of data files and generator lists
    """

    @staticmethod
    def hash_payload(payload: Any) -> str:
        """
        Hash a JSON-serializable payload

        Args:
            payload: Data to hash; keys are sorted before hashing

        Returns:
            Hex digest prefixed with the algorithm name
        """
        text = json.dumps(payload, sort_keys=True, separators=(",", ":"), default=str)
        return "sha256:" + hashlib.sha256(text.encode("utf-8")).hexdigest()

    @staticmethod
    def hash_file(path: Union[str, Path]) -> str:
        """
        Hash the bytes of a file

        Args:
            path: File path

        Returns:
            Hex digest prefixed with the algorithm name, or "missing" when the file does not exist
        """
        try:
            data = Path(path).read_bytes()
        except FileNotFoundError:
            logger.error(f"Cannot hash {path}: file not found")
            return "missing"
        return "sha256:" + hashlib.sha256(data).hexdigest()


class ReportRenderer:
    """
    Plain-text rendering of verification reports
    """

    @staticmethod
    def render_text(report: VerificationReport) -> str:
        """
        Render a report as deterministic text

        Args:
            report: Verification report, freshly computed or re-read from JSON

        Returns:
            Text with one line per check record; timing is left out so equal reports render equally
        """
        lines = [
            f"suite: {report.suite}",
            f"toolkit: {report.toolkit_version}",
            f"seed: {report.seed}",
        ]
        if report.input_hashes:
            lines.append("inputs:")
            for name, digest in sorted(report.input_hashes.items()):
                lines.append(f"  {name}  {digest}")
        width = max((len(r.id) for r in report.records), default=0)
        for record in report.records:
            line = f"{record.status.value:<4}  {record.id:<{width}}  {record.citation}"
            if record.summary:
                line += f"  | {record.summary}"
            lines.append(line)
        counts = report.counts()
        lines.append(f"summary: {counts['PASS']} PASS, {counts['FAIL']} FAIL, {counts['SKIP']} SKIP")
        return "\n".join(lines) + "\n"


class DecimalFormatter:
    """
    Rounding of exact values for display
    """

    @staticmethod
    def to_decimal(value: Union[Fraction, Decimal, int, str]) -> Decimal:
        if isinstance(value, Fraction):
            return Decimal(value.numerator) / Decimal(value.denominator)
        return Decimal(value)

    @staticmethod
    def round_half_up(value: Union[Fraction, Decimal, int, str], places: int) -> Decimal:
        """
        Round to a fixed number of decimal places, halves away from zero

        Args:
            value: Exact or decimal value
            places: Digits after the decimal point

        Returns:
            Rounded Decimal
        """
        quantum = Decimal(1).scaleb(-places)
        if isinstance(value, Fraction):
            # exact: scale, round the rational, scale back
            scaled = value * 10 ** places
            q, r = divmod(abs(scaled.numerator), scaled.denominator)
            if 2 * r >= scaled.denominator:
                q += 1
            sign = -1 if scaled < 0 else 1
            return (Decimal(sign * q) * quantum).quantize(quantum)
        return DecimalFormatter.to_decimal(value).quantize(quantum, rounding=ROUND_HALF_UP)

    @staticmethod
    def format_fixed(value: Union[Fraction, Decimal, int, str], places: int, leading_zero: bool = True) -> str:
        text = f"{DecimalFormatter.round_half_up(value, places):f}"
        if not leading_zero:
            if text.startswith("0."):
                text = text[1:]
            elif text.startswith("-0."):
                text = "-" + text[2:]
        return text

    @staticmethod
    def with_uncertainty(value: Union[Fraction, Decimal], sigma: Union[Fraction, Decimal], places: int) -> str:
        """
        Concise notation such as 1776.84145(3)

        Args:
            value: Central value
            sigma: Standard uncertainty
            places: Decimal places of the central value; sigma is given in units of the last place
        """
        digits = DecimalFormatter.round_half_up(Fraction(sigma) * 10 ** places, 0)
        return f"{DecimalFormatter.format_fixed(value, places)}({int(digits)})"
