import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Callable, Dict, List, Optional

from app.core.exceptions import FixtureError
from app.services.exactmath import Quaternion, quaternion_mul
from app.services.finfield import SL29Model, TripleCoverModel, build_3alt6, build_sl29, special_linear_2
from app.services.permgroup import (
    PermGroup, Permutation, alternating_group, close_generators, format_cycles, from_cycles,
    regular_representation, symmetric_group,
)
from app.utils.helpers import ContentHasher

logger = logging.getLogger(__name__)


@dataclass
class RegistryEntry:
    name: str
    description: str
    builder: Callable[[], PermGroup]
    generator_names: tuple = ()


class GroupRegistry:
    """
    Named groups used by the suites, built on first use and shared afterwards
    """

    def __init__(self):
        self._entries: Dict[str, RegistryEntry] = {}
        self._groups: Dict[str, PermGroup] = {}
        self.quaternions: Dict[Permutation, Quaternion] = {}
        self._register_defaults()

    def register(self, name: str, description: str, builder: Callable[[], PermGroup],
                 generator_names: tuple = ()):
        self._entries[name] = RegistryEntry(name, description, builder, generator_names)

    def names(self) -> List[str]:
        return list(self._entries)

    def describe(self, name: str) -> str:
        return self._entry(name).description

    def generator_names(self, name: str) -> tuple:
        return self._entry(name).generator_names

    def _entry(self, name: str) -> RegistryEntry:
        try:
            return self._entries[name]
        except KeyError:
            raise FixtureError(f"unknown group {name!r}; known groups: {', '.join(self._entries)}")

    def get(self, name: str) -> PermGroup:
        group = self._groups.get(name)
        if group is None:
            group = self._entry(name).builder()
            group.name = name
            self._groups[name] = group
            logger.info(f"Registry built {name}: order {group.order}, degree {group.degree}")
        return group

    def content_hash(self, name: str) -> str:
        """Hash of the generators; changes whenever the construction changes."""
        group = self.get(name)
        return ContentHasher.hash_payload({"name": name, "degree": group.degree,
                                           "generators": [list(g) for g in group.generators]})

    # -- constructions -------------------------------------------------

    @cached_property
    def sl29_model(self) -> SL29Model:
        return build_sl29()

    @cached_property
    def triple_cover(self) -> TripleCoverModel:
        return build_3alt6()

    def _quaternion_group(self) -> PermGroup:
        i = Quaternion.unit("i")
        omega = Quaternion(Fraction(-1, 2), Fraction(1, 2), Fraction(1, 2), Fraction(1, 2))
        elements = close_generators([i, omega], quaternion_mul, Quaternion.unit("1"), name="2.Alt(4)")
        group, perm_of = regular_representation(elements, quaternion_mul, [i, omega], name="2alt4-quaternion")
        self.quaternions = {p: q for q, p in perm_of.items()}
        return group

    def _sl29(self) -> PermGroup:
        return self.sl29_model.vectors

    def _preimage(self, cycles_list, name: str) -> PermGroup:
        letters = range(6)
        gens = [from_cycles(c, letters) for c in cycles_list]
        target = PermGroup(gens, degree=6)
        return self.sl29_model.preimage(target, name)

    def _register_defaults(self):
        self.register("alt5", "Alt(5) = <(1,2,3,4,5), (1,2,3)>",
                      lambda: PermGroup([from_cycles([(1, 2, 3, 4, 5)], range(1, 6)),
                                         from_cycles([(1, 2, 3)], range(1, 6))]))
        self.register("alt6", "Alt(6) = <(1,2,3), (2,3,4,5,6)>",
                      lambda: PermGroup([from_cycles([(1, 2, 3)], range(1, 7)),
                                         from_cycles([(2, 3, 4, 5, 6)], range(1, 7))]))
        self.register("sym3", "Sym(3)", lambda: symmetric_group(3))
        self.register("alt4", "Alt(4)", lambda: alternating_group(4))
        self.register("sym4", "Sym(4) = <(1,2,3,4), (1,2)>", lambda: symmetric_group(4))
        self.register("sym6", "Sym(6) = <(1,...,6), (1,2)>", lambda: symmetric_group(6))
        self.register("2alt4-quaternion",
                      "binary tetrahedral group <i, (-1+i+j+k)/2> acting on itself by left multiplication",
                      self._quaternion_group, generator_names=("a", "b"))
        self.register("sl23", "SL(2,3) on its 8 nonzero vectors",
                      lambda: special_linear_2(3).vector_action[0])
        self.register("sl29", "SL(2,9) = 2.Alt(6) on its 80 nonzero vectors", self._sl29)
        self.register("2alt5", "preimage in SL(2,9) of the Alt(5) fixing the sixth letter",
                      lambda: self._preimage([[(0, 1, 2)], [(0, 1, 2, 3, 4)]], "2alt5"))
        self.register("2sym4", "preimage in SL(2,9) of <(1,2,3,4)(5,6), (1,2)(5,6)>",
                      lambda: self._preimage([[(0, 1, 2, 3), (4, 5)], [(0, 1), (4, 5)]], "2sym4"))
        self.register("3alt6-gf4", "3.Alt(6) over GF(4) on its 63 nonzero vectors",
                      lambda: self.triple_cover.vector_group)

    # -- words ---------------------------------------------------------

    def evaluate_word(self, name: str, word: str) -> Permutation:
        """
        Evaluate a word such as 'a2b' in the named generators ('e' is the identity)
        """
        group = self.get(name)
        names = self.generator_names(name)
        if not names:
            raise FixtureError(f"group {name!r} has no named generators")
        lookup = dict(zip(names, group.generators))
        result = group.identity
        pos = 0
        word = word.strip()
        if word in ("e", "1", ""):
            return result
        while pos < len(word):
            letter = word[pos]
            if letter not in lookup:
                raise FixtureError(f"unknown generator {letter!r} in word {word!r}")
            pos += 1
            digits = ""
            while pos < len(word) and word[pos].isdigit():
                digits += word[pos]
                pos += 1
            for _ in range(int(digits or 1)):
                result = tuple(result[x] for x in lookup[letter])
        return result

    def quaternion_of(self, p: Permutation) -> Optional[Quaternion]:
        self.get("2alt4-quaternion")
        return self.quaternions.get(p)

    def format_element(self, name: str, p: Permutation) -> str:
        if name == "2alt4-quaternion":
            return str(self.quaternion_of(p))
        return format_cycles(p)


group_registry = GroupRegistry()
