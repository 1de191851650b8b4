import os
from dataclasses import dataclass
from dotenv import load_dotenv

load_dotenv()

_SHIPPED_SCENARIOS = os.path.join(os.path.dirname(__file__), "data", "scenarios")


@dataclass
class Settings:
    # sky fans
    fan: int = int(os.getenv("SKYLINK_FAN", "720"))
    fan_max: int = int(os.getenv("SKYLINK_FAN_MAX", "5760"))
    geodesic_tol: float = float(os.getenv("SKYLINK_GEODESIC_TOL", "1e-10"))
    # verdict bands
    null_band: float = float(os.getenv("SKYLINK_NULL_BAND", "1e-9"))
    marginal_band: float = float(os.getenv("SKYLINK_MARGINAL_BAND", "1e-6"))
    tangency_band: float = float(os.getenv("SKYLINK_TANGENCY_BAND", "1e-8"))
    nonneg_tol: float = float(os.getenv("SKYLINK_NONNEG_TOL", "1e-8"))
    residual_max: float = float(os.getenv("SKYLINK_RESIDUAL_MAX", "1e-4"))
    # distance oracle
    grid_resolution: int = int(os.getenv("SKYLINK_GRID_RESOLUTION", "400"))
    # generating functions
    cell_variation: float = float(os.getenv("SKYLINK_CELL_VARIATION", "1e-3"))
    grid_q_max: int = int(os.getenv("SKYLINK_GRID_Q_MAX", "8192"))
    grid_xi: int = int(os.getenv("SKYLINK_GRID_XI", "33"))
    # runs
    workers: int = int(os.getenv("SKYLINK_WORKERS", "1"))
    svg_limit: int = int(os.getenv("SKYLINK_SVG_LIMIT", "8"))
    scenario_dir: str = os.getenv("SKYLINK_SCENARIO_DIR", _SHIPPED_SCENARIOS)
    log_level: str = os.getenv("SKYLINK_LOG_LEVEL", "INFO")


settings = Settings()
