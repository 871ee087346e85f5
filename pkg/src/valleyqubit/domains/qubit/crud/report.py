import json
from pathlib import Path
from typing import List, Sequence, Tuple

from pydantic import TypeAdapter, ValidationError

from valleyqubit.core.exceptions import DomainError, ScanParseError, StorageError
from valleyqubit.domains.qubit.crud.scan import SCAN_HEADER, format_angle_deg, render_rows
from valleyqubit.domains.qubit.models.qstate import DensityMatrix, density_matrix_violation
from valleyqubit.domains.qubit.schemas.results import PrecessionResult, TomographyResult, UncertaintyReport
from valleyqubit.domains.qubit.schemas.state import MatrixEntries, entries_to_matrix
from valleyqubit.utils.files import dump_json, staged_writes
from valleyqubit.utils.logging import get_logger

logger = get_logger(__name__)

SWEEP_HEADER = [
    "alpha_deg",
    "entropy_sum",
    "entropic_bound",
    "deviation_product",
    "robertson_bound",
    "coherence_sum",
    "coherence_bound",
]

_entries_adapter = TypeAdapter(MatrixEntries)


def format_value(x: float, digits: int = 12) -> str:
    """Fixed-point text, rounded so sub-ulp noise never reaches the file."""
    return f"{round(float(x), digits) + 0.0:.{digits}f}"


class ReportCRUD:
    """Result artifacts: tomography JSON, uncertainty sweep CSV, dynamics pattern and summary."""

    def write_tomography(self, result: TomographyResult, path: str | Path) -> Path:
        path = Path(path)
        with staged_writes() as writer:
            writer.write_text(path, dump_json(result.model_dump(mode="json")))
        logger.info("Saved tomography result to %s", path)
        return path

    def write_tomography_batch(self, results: Sequence[Tuple[TomographyResult, Path]]) -> List[Path]:
        """Every result file appears together or none does."""
        with staged_writes() as writer:
            paths = [writer.write_text(Path(p), dump_json(r.model_dump(mode="json"))) for r, p in results]
        logger.info("Saved %d tomography results", len(paths))
        return paths

    def read_density_matrix(self, path: str | Path) -> DensityMatrix:
        """Density matrix from a tomography JSON (``rho`` key) or a bare entries array."""
        path = Path(path)
        try:
            payload = json.loads(path.read_text(encoding="utf-8"))
        except OSError as e:
            raise StorageError(f"Cannot read {path}: {e}", path=str(path), original_error=e) from e
        except json.JSONDecodeError as e:
            raise ScanParseError(f"Invalid JSON: {e.msg}", path=str(path), line=e.lineno) from e

        raw = payload.get("rho") if isinstance(payload, dict) else payload
        if raw is None:
            raise ScanParseError("No 'rho' entry found", path=str(path))
        try:
            matrix = entries_to_matrix(_entries_adapter.validate_python(raw))
        except (ValidationError, ValueError) as e:
            raise ScanParseError(f"Malformed matrix entries: {e}", path=str(path)) from e

        violation = density_matrix_violation(matrix)
        if violation:
            raise DomainError(f"{path}: not a density matrix, violates {violation}", field="rho")
        return DensityMatrix(matrix)

    def render_sweep(self, reports: Sequence[UncertaintyReport]) -> str:
        rows = (
            (
                format_angle_deg(r.alpha),
                format_value(r.entropy_sum),
                format_value(r.entropic_bound),
                format_value(r.deviation_product),
                format_value(r.robertson_bound),
                format_value(r.coherence_sum),
                format_value(r.coherence_bound),
            )
            for r in reports
        )
        return render_rows(SWEEP_HEADER, rows)

    def write_sweep(self, reports: Sequence[UncertaintyReport], path: str | Path) -> Path:
        path = Path(path)
        with staged_writes() as writer:
            writer.write_text(path, self.render_sweep(reports))
        logger.info("Saved uncertainty sweep with %d rows to %s", len(reports), path)
        return path

    def write_dynamics(
        self,
        pattern: Sequence[Tuple[float, float]],
        result: PrecessionResult,
        csv_path: str | Path,
        summary_path: str | Path,
    ) -> Tuple[Path, Path]:
        csv_path, summary_path = Path(csv_path), Path(summary_path)
        rows = ((format_angle_deg(a), repr(float(i))) for a, i in pattern)
        with staged_writes() as writer:
            writer.write_text(csv_path, render_rows(SCAN_HEADER, rows))
            writer.write_text(summary_path, dump_json(result.summary()))
        logger.info("Saved precession pattern to %s and summary to %s", csv_path, summary_path)
        return csv_path, summary_path
