"""Run-time configuration via environment variables and .env file."""

from pathlib import Path

from pydantic import field_validator
from pydantic_settings import BaseSettings
from pydantic_settings.sources import DotEnvSettingsSource, PydanticBaseSettingsSource

from finsler_lab.jets.basis import TruncationOrder

# Path to .env file (patch in tests to use tmp_path / ".env")
_ENV_FILE: Path = Path(".env")


class Settings(BaseSettings):
    model_config = {
        "env_prefix": "FINSLER_LAB_",
        "env_file_encoding": "utf-8",
    }

    @classmethod
    def settings_customise_sources(
        cls,
        settings_cls: type[BaseSettings],
        init_settings: PydanticBaseSettingsSource,
        env_settings: PydanticBaseSettingsSource,
        dotenv_settings: PydanticBaseSettingsSource,
        file_secret_settings: PydanticBaseSettingsSource,
    ) -> tuple[PydanticBaseSettingsSource, ...]:
        # Load .env from _ENV_FILE (patchable in tests)
        return (
            init_settings,
            env_settings,
            DotEnvSettingsSource(
                settings_cls,
                env_file=_ENV_FILE,
                env_file_encoding="utf-8",
            ),
            file_secret_settings,
        )

    # Logging
    log_level: str = "info"

    # Parallelism; FINSLER_LAB_THREADS is the fallback for --threads
    threads: int = 1

    # Reproducible point sampling
    seed: int = 20240601
    sample_count: int = 100

    # Jet truncation for the full geometry tower
    max_x_order: int = 3
    max_v_order: int = 6

    # Reduced truncation inside the geodesic integrator (spray only)
    geodesic_x_order: int = 1
    geodesic_v_order: int = 3

    # Reduced truncation at fiber quadrature nodes (Theta divergence only)
    fiber_x_order: int = 1
    fiber_v_order: int = 3

    # Conditioning thresholds
    eps_div: float = 1e-10
    tol_det: float = 1e-10

    # Causal probes
    n_path: int = 64

    # Fiber quadrature
    chi_max: float = 3.0
    quadrature_orders: list[int] = [8, 8, 8]

    # Gravitational coupling (geometrized units)
    kappa_sq: float = 1.0

    @field_validator("quadrature_orders", mode="before")
    @classmethod
    def parse_quadrature_orders(cls, v: object) -> list[int]:
        """Parse comma-separated string or list."""
        if isinstance(v, str):
            return [int(s.strip()) for s in v.split(",") if s.strip()]
        if isinstance(v, list | tuple):
            return [int(s) for s in v]
        raise ValueError(f"Cannot parse quadrature orders from {v!r}")

    @field_validator("quadrature_orders")
    @classmethod
    def check_quadrature_orders(cls, v: list[int]) -> list[int]:
        if len(v) != 3 or min(v) < 1:
            raise ValueError(f"Need three positive Gauss orders, got {v}")
        return v

    @field_validator("threads")
    @classmethod
    def check_threads(cls, v: int) -> int:
        if v < 1:
            raise ValueError(f"threads must be positive, got {v}")
        return v

    def truncation_order(self) -> TruncationOrder:
        """Default truncation for the full geometry tower."""
        return TruncationOrder(self.max_x_order, self.max_v_order)

    def geodesic_order(self) -> TruncationOrder:
        return TruncationOrder(self.geodesic_x_order, self.geodesic_v_order)

    def fiber_order(self) -> TruncationOrder:
        return TruncationOrder(self.fiber_x_order, self.fiber_v_order)


def load_config() -> Settings:
    """Load configuration from .env and environment (env overrides .env)."""
    return Settings()


settings = Settings()
