import json
import logging
from pathlib import Path
from typing import Dict, Optional

from app.core.config import settings
from app.services.group_registry import GroupRegistry, group_registry
from app.services.repkit import CharacterTable, character_table

logger = logging.getLogger(__name__)


class TableCache:
    """
    Character tables on disk, one JSON file per registry group, keyed by a hash of its generators
    """

    def __init__(self, cache_dir: Optional[str] = None, registry: GroupRegistry = group_registry):
        self.cache_dir = Path(cache_dir or settings.cache_dir)
        self.registry = registry
        self._tables: Dict[str, CharacterTable] = {}

    def _path(self, name: str) -> Path:
        return self.cache_dir / f"{name}.json"

    def load(self, name: str) -> Optional[CharacterTable]:
        path = self._path(name)
        if not path.exists():
            return None
        try:
            data = json.loads(path.read_text())
        except (OSError, ValueError) as e:
            logger.error(f"Ignoring unreadable cache file {path}: {str(e)}")
            return None
        if data.get("hash") != self.registry.content_hash(name):
            logger.info(f"Cached table of {name} is stale, recomputing")
            return None
        group = self.registry.get(name)
        table = CharacterTable.from_json(group, data["table"])
        reps = [c["representative"] for c in data["table"]["classes"]]
        if reps != [self.registry.format_element(name, r) for r in table.classes.representatives]:
            logger.info(f"Cached class order of {name} differs, recomputing")
            return None
        if not table.check_orthogonality():
            logger.warning(f"Cached table of {name} fails the orthogonality relations, recomputing")
            return None
        return table

    def save(self, name: str, table: CharacterTable) -> None:
        try:
            self.cache_dir.mkdir(parents=True, exist_ok=True)
            payload = {"hash": self.registry.content_hash(name), "table": self.export(name, table)}
            self._path(name).write_text(json.dumps(payload, indent=1, sort_keys=True))
        except OSError as e:
            logger.error(f"Could not write table cache for {name}: {str(e)}")

    def export(self, name: str, table: CharacterTable) -> Dict:
        return table.to_json(lambda p: self.registry.format_element(name, p))

    def get(self, name: str) -> CharacterTable:
        """
        Character table of a registry group, from memory, disk or a fresh computation

        Raises:
            FixtureError: unknown group name
            CharacterTableError: the computation fails
        """
        table = self._tables.get(name)
        if table is None:
            table = self.load(name)
            if table is None:
                table = character_table(self.registry.get(name))
                self.save(name, table)
            self._tables[name] = table
        return table
