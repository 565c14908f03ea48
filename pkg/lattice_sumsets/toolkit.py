import logging
from fractions import Fraction
from typing import Any, Dict, Optional, Tuple, Union

from .config import ToolkitConfig
from .models import Cover, PointSet, Progression, SweepSummary, VerificationReport
from .services.covering_service import CoveringService
from .services.oracle_service import OracleService
from .services.progression_service import ProgressionService
from .services.sumset_service import doubling_constant, minkowski_sum
from .services.sweep_service import SweepService
from .services.verification_service import VerificationService

logger = logging.getLogger(__name__)


class LatticeToolkit:
    """Main orchestrator wiring every service from one configuration."""

    def __init__(self, config: Optional[Union[ToolkitConfig, Dict[str, Any]]] = None):
        """
        Initialize the toolkit with configuration.

        Args:
            config: A ToolkitConfig, a configuration dictionary in the
                config.sample.json layout, or None for defaults
        """
        if config is None:
            config = ToolkitConfig()
        elif isinstance(config, dict):
            config = ToolkitConfig.from_dict(config)
        self.config = config
        backend = config.backend

        self.progressions = ProgressionService(max_enum=config.max_enum, backend=backend)
        self.oracles = OracleService(
            max_parallelepiped_points=config.max_parallelepiped_points,
            max_parallelepiped_dim=config.max_parallelepiped_dim,
            max_search=config.max_search,
            max_oracle_nodes=config.max_oracle_nodes,
            backend=backend,
        )
        self.verifier = VerificationService(
            progressions=self.progressions,
            oracles=self.oracles,
            max_subset=config.max_subset,
            backend=backend,
        )
        self.covering = CoveringService(progressions=self.progressions, backend=backend)
        self.sweeps = SweepService(
            verifier=self.verifier,
            progressions=self.progressions,
            oracles=self.oracles,
            threads=config.threads,
            seed=config.seed,
            backend=backend,
        )
        logger.debug(f"Toolkit configured: backend={backend}, threads={config.threads}, max_enum={config.max_enum}")

    def sumset(self, A: PointSet, B: PointSet) -> PointSet:
        return minkowski_sum(A, B, backend=self.config.backend)

    def doubling(self, A: PointSet) -> Fraction:
        return doubling_constant(A, backend=self.config.backend)

    def cover(self, A: PointSet, P: Optional[Progression], epsilon: Fraction) -> Tuple[Cover, VerificationReport]:
        logger.info(f"Covering {len(A)} point(s) with epsilon={epsilon}")
        return self.covering.freiman_bilu_cover(A, P, epsilon)

    def sweep(self, sweep_id: str, seed: Optional[int] = None, trials: Optional[int] = None,
              max_size: Optional[int] = None) -> SweepSummary:
        return self.sweeps.run(sweep_id, seed=seed, trials=trials, max_size=max_size)
