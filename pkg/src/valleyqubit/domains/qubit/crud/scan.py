import csv
import io
import json
import math
from pathlib import Path
from typing import Optional

from pydantic import ValidationError

from valleyqubit.core.exceptions import ScanParseError, StorageError
from valleyqubit.domains.qubit.schemas.scan import PLScan
from valleyqubit.utils.files import StagedWriter, dump_json, staged_writes
from valleyqubit.utils.logging import get_logger

logger = get_logger(__name__)

SCAN_HEADER = ["alpha_deg", "intensity"]
SIDECAR_SCHEMA = "valleyqubit.scan/1"


def sidecar_path(csv_path: str | Path) -> Path:
    csv_path = Path(csv_path)
    return csv_path.with_name(csv_path.stem + ".meta.json")


def format_angle_deg(alpha: float) -> str:
    return repr(round(math.degrees(alpha), 10) + 0.0)


def render_rows(header, rows) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


class ScanCRUD:
    """PL scans on disk: ``alpha_deg,intensity`` CSV plus a JSON metadata sidecar."""

    def render_csv(self, scan: PLScan) -> str:
        return render_rows(SCAN_HEADER, ((format_angle_deg(a), repr(float(i))) for a, i in zip(scan.angles, scan.intensities)))

    def render_sidecar(self, scan: PLScan) -> str:
        payload = {
            "schema": SIDECAR_SCHEMA,
            "sigma_plus": scan.sigma_plus,
            "sigma_minus": scan.sigma_minus,
            "params": scan.params.model_dump(mode="json") if scan.params else None,
            "prepared": scan.prepared.model_dump(mode="json") if scan.prepared else None,
            "noise": scan.noise.model_dump(mode="json") if scan.noise else None,
            "seed": scan.seed,
        }
        if scan.params is not None:
            payload["derived"] = {
                "t2_star": scan.params.t2_star,
                "visibility": scan.params.visibility,
                "q3": scan.params.q3,
            }
        if scan.prepared is not None:
            payload["prepared_deg"] = {"theta": scan.prepared.theta_deg, "phi": scan.prepared.phi_deg}
        return dump_json(payload)

    def stage(self, writer: StagedWriter, scan: PLScan, csv_path: str | Path) -> Path:
        csv_path = Path(csv_path)
        writer.write_text(csv_path, self.render_csv(scan))
        writer.write_text(sidecar_path(csv_path), self.render_sidecar(scan))
        return csv_path

    def write(self, scan: PLScan, csv_path: str | Path) -> Path:
        with staged_writes() as writer:
            path = self.stage(writer, scan, csv_path)
        logger.info("Saved scan with %d points to %s", len(scan.angles), path)
        return path

    def _read_text(self, path: Path) -> str:
        try:
            return path.read_text(encoding="utf-8")
        except OSError as e:
            raise StorageError(f"Cannot read {path}: {e}", path=str(path), original_error=e) from e

    def _read_sidecar(self, path: Path) -> Optional[dict]:
        if not path.exists():
            return None
        try:
            payload = json.loads(self._read_text(path))
        except json.JSONDecodeError as e:
            raise ScanParseError(f"Invalid JSON: {e.msg}", path=str(path), line=e.lineno) from e
        if not isinstance(payload, dict):
            raise ScanParseError("Sidecar must be a JSON object", path=str(path))
        return payload

    def read(self, csv_path: str | Path) -> PLScan:
        csv_path = Path(csv_path)
        reader = csv.reader(io.StringIO(self._read_text(csv_path)))
        angles, intensities = [], []
        for line_no, row in enumerate(reader, start=1):
            if line_no == 1:
                if [c.strip() for c in row] != SCAN_HEADER:
                    raise ScanParseError(f"Header must be {','.join(SCAN_HEADER)}", path=str(csv_path), line=1)
                continue
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != 2:
                raise ScanParseError(f"Expected 2 columns, got {len(row)}", path=str(csv_path), line=line_no)
            try:
                alpha_deg, intensity = float(row[0]), float(row[1])
            except ValueError:
                raise ScanParseError(f"Non-numeric value in row {row!r}", path=str(csv_path), line=line_no)
            angles.append(math.radians(alpha_deg))
            intensities.append(intensity)

        meta = self._read_sidecar(sidecar_path(csv_path)) or {}
        try:
            return PLScan(
                angles=angles,
                intensities=intensities,
                sigma_plus=meta.get("sigma_plus"),
                sigma_minus=meta.get("sigma_minus"),
                params=meta.get("params"),
                prepared=meta.get("prepared"),
                noise=meta.get("noise"),
                seed=meta.get("seed"),
            )
        except ValidationError as e:
            raise ScanParseError(f"Invalid scan: {e.errors()[0]['msg']}", path=str(csv_path)) from e
