import json
import os
import tempfile
from contextlib import contextmanager
from pathlib import Path
from typing import Any, Dict, Iterator, List, Optional, Tuple

from valleyqubit.config import settings
from valleyqubit.core.exceptions import StorageError
from valleyqubit.utils.logging import get_logger

logger = get_logger(__name__)


def resolve_output(path: str | Path) -> Path:
    """Relative output paths resolve beneath ``OUTPUT_DIR`` when it is set."""
    path = Path(path)
    if settings.OUTPUT_DIR is not None and not path.is_absolute():
        return Path(settings.OUTPUT_DIR) / path
    return path


def dump_json(payload: Dict[str, Any]) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


class StagedWriter:
    """Collects files in temporaries next to their targets; nothing is visible until commit."""

    def __init__(self):
        self._staged: List[Tuple[str, Path]] = []

    def write_text(self, path: Path, text: str) -> Path:
        path = Path(path)
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=path.parent)
            with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        except OSError as e:
            raise StorageError(f"Cannot write {path}: {e}", path=str(path), original_error=e) from e
        self._staged.append((tmp, path))
        return path

    def commit(self) -> None:
        """Move every staged file into place.

        A target that already exists is set aside first, so a failed move
        restores the previous contents and removes outputs this commit created.
        The rollback itself is best effort: if restoring a set-aside target also
        fails, that target is left under its ``.bak`` name.
        """
        committed: List[Tuple[Path, Optional[str]]] = []
        path = None
        try:
            for tmp, path in self._staged:
                backup = None
                if path.exists():
                    backup = f"{tmp}.bak"
                    os.replace(path, backup)
                committed.append((path, backup))
                os.replace(tmp, path)
                logger.debug("Wrote %s", path)
        except OSError as e:
            self._rollback(committed)
            self.discard()
            raise StorageError(f"Cannot move output into place at {path}: {e}", path=str(path), original_error=e) from e
        for _, backup in committed:
            if backup is not None:
                try:
                    os.unlink(backup)
                except OSError:
                    logger.warning("Could not remove backup %s", backup)
        self._staged.clear()

    @staticmethod
    def _rollback(committed: List[Tuple[Path, Optional[str]]]) -> None:
        for path, backup in reversed(committed):
            try:
                os.unlink(path)
            except OSError:
                pass
            if backup is not None:
                try:
                    os.replace(backup, path)
                except OSError as e:
                    logger.error("Could not restore %s from %s: %s", path, backup, e)

    def discard(self) -> None:
        for tmp, _ in self._staged:
            try:
                os.unlink(tmp)
            except OSError:
                pass
        self._staged.clear()


@contextmanager
def staged_writes() -> Iterator[StagedWriter]:
    """All-or-nothing multi-file output."""
    writer = StagedWriter()
    try:
        yield writer
    except BaseException:
        writer.discard()
        raise
    writer.commit()
