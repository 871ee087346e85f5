import pytest
import pytest_asyncio
from httpx import AsyncClient, ASGITransport

from valleyqubit.config import settings
from valleyqubit.domains.qubit.schemas.params import PhysicalParams
from valleyqubit.domains.qubit.schemas.state import PureStateAngles
from valleyqubit.domains.qubit.services.plmodel_service import synthesize_scan
from valleyqubit.main import app
from valleyqubit.utils.validators import degrees_to_radians, parse_scan_grid


@pytest_asyncio.fixture
async def client():
    transport = ASGITransport(app=app)
    async with AsyncClient(transport=transport, base_url="http://test") as ac:
        yield ac


@pytest.fixture
def scan_grid():
    """0:360:15 in radians."""
    return degrees_to_radians(parse_scan_grid("0:360:15"))


@pytest.fixture
def low_t_params():
    return PhysicalParams.from_visibility(0.2)


@pytest.fixture
def make_scan(scan_grid):
    def _make(theta_deg, phi_deg=0.0, visibility=0.2, **kwargs):
        angles = PureStateAngles.from_degrees(theta_deg, phi_deg)
        return synthesize_scan(angles, scan_grid, PhysicalParams.from_visibility(visibility), **kwargs)

    return _make


@pytest.fixture(autouse=True)
def no_output_dir(monkeypatch):
    monkeypatch.setattr(settings, "OUTPUT_DIR", None)
