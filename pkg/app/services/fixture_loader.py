import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional

from pydantic import ValidationError

from app.core.config import settings
from app.core.exceptions import FixtureError
from app.models.schemas import CliffordFixture, CliffordFixtureFile, ParticleFile
from app.services.clifford import GAMMA_ALGEBRA, GeneratorFixture, abstract_algebra, parse_element
from app.services.finfield import ParticleAssignment, bitstring, parse_gf4_vector
from app.utils.helpers import ContentHasher

logger = logging.getLogger(__name__)

PROJECT_ROOT = Path(__file__).resolve().parents[2]

CLIFFORD_FILE = "clifford_generators.json"
PARTICLE_FILES = {"gf2": "particles_gf2.json", "gf4": "particles_gf4.json"}
REAL_TABLES_FILE = "real_tables.json"
ACCEPTANCE_FILE = "mass_acceptance.json"


def resolve_path(path: str) -> Path:
    """Relative paths are tried against the working directory, then the project root."""
    p = Path(path)
    if p.is_absolute() or p.exists():
        return p
    return PROJECT_ROOT / p


class FixtureLoader:
    """
    Reads and validates the shipped data files
    """

    def __init__(self, fixtures_dir: Optional[str] = None):
        self.fixtures_dir = resolve_path(fixtures_dir or settings.fixtures_dir)
        self._clifford: Optional[CliffordFixtureFile] = None

    def path(self, filename: str) -> Path:
        return self.fixtures_dir / filename

    def read_json(self, filename: str) -> Dict[str, Any]:
        """
        Raises:
            FixtureError: file missing or not valid JSON
        """
        path = self.path(filename)
        try:
            return json.loads(path.read_text())
        except FileNotFoundError:
            raise FixtureError(f"fixture file {path} not found")
        except ValueError as e:
            raise FixtureError(f"fixture file {path} is not valid JSON: {str(e)}")

    def input_hash(self, filename: str) -> str:
        return ContentHasher.hash_file(self.path(filename))

    # -- Clifford fixtures -------------------------------------------------

    def clifford_file(self) -> CliffordFixtureFile:
        if self._clifford is None:
            try:
                self._clifford = CliffordFixtureFile.model_validate(self.read_json(CLIFFORD_FILE))
            except ValidationError as e:
                raise FixtureError(f"{CLIFFORD_FILE} is malformed: {str(e)}")
            logger.info(f"Loaded {len(self._clifford.fixtures)} Clifford fixtures")
        return self._clifford

    def clifford_names(self) -> List[str]:
        return [f.name for f in self.clifford_file().fixtures]

    def clifford_fixture(self, name: str) -> CliffordFixture:
        for fix in self.clifford_file().fixtures:
            if fix.name == name:
                return fix
        raise FixtureError(f"unknown Clifford fixture {name!r}")

    @staticmethod
    def algebra_of(fix: CliffordFixture):
        if fix.algebra == "abstract":
            if not fix.squares:
                raise FixtureError(f"abstract fixture {fix.name} declares no generator squares")
            return abstract_algebra(tuple(fix.squares))
        return GAMMA_ALGEBRA

    def to_generator_fixture(self, fix: CliffordFixture) -> GeneratorFixture:
        algebra = self.algebra_of(fix)
        return GeneratorFixture(
            name=fix.name,
            algebra=algebra,
            generators=[parse_element(algebra, g) for g in fix.generators],
            generator_text=list(fix.generators),
            claimed_signature=tuple(fix.claimed_signature) if fix.claimed_signature else None,
            claimed_pseudoscalar=parse_element(algebra, fix.claimed_pseudoscalar)
            if fix.claimed_pseudoscalar else None,
            pseudoscalar_sign=fix.pseudoscalar_sign,
            expected_dimension=fix.expected_dimension,
            label=fix.label,
            claim=fix.claim,
        )

    def generator_fixtures(self) -> Dict[str, GeneratorFixture]:
        return {f.name: self.to_generator_fixture(f) for f in self.clifford_file().fixtures if f.kind == "generators"}

    # -- particle files ----------------------------------------------------

    def particles(self, model: str) -> ParticleAssignment:
        """
        Raises:
            FixtureError: unknown model, missing or malformed file, unparsable vector
        """
        if model not in PARTICLE_FILES:
            raise FixtureError(f"unknown particle model {model!r}")
        try:
            data = ParticleFile.model_validate(self.read_json(PARTICLE_FILES[model]))
        except ValidationError as e:
            raise FixtureError(f"{PARTICLE_FILES[model]} is malformed: {str(e)}")
        parse = bitstring if model == "gf2" else parse_gf4_vector
        vectors, handedness, colours, rows = {}, {}, {}, {}
        for entry in data.particles:
            try:
                vectors[entry.name] = [parse(v) for v in entry.vectors]
            except ValueError as e:
                raise FixtureError(f"particle {entry.name}: {str(e)}")
            handedness[entry.name] = entry.handedness
            if entry.colours:
                colours[entry.name] = list(entry.colours)
            if entry.row is not None:
                rows[entry.name] = entry.row
        return ParticleAssignment(model, vectors, handedness, colours, rows,
                                  generation_scalars=dict(data.lepton_generation_scalars),
                                  column_orbit=list(data.left_action_18_orbit))

    # -- tables and thresholds ---------------------------------------------

    def real_tables(self) -> Dict[str, Dict[str, Any]]:
        return {t["group"]: t for t in self.read_json(REAL_TABLES_FILE).get("tables", [])}

    def acceptance(self) -> Dict[str, Any]:
        return self.read_json(ACCEPTANCE_FILE)


fixture_loader = FixtureLoader()
