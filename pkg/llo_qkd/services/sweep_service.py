"""Distance sweeps behind the key-rate and excess-noise curves."""

import logging
import math
from typing import Callable, Dict, List, Optional

from llo_qkd.config import settings
from llo_qkd.core.attack import added_noise_under_attack, conservative_budget
from llo_qkd.core.const import ATTACKED_MONITORED_LABEL, INSECURE_DIAGNOSTIC_LABEL, ModelKind
from llo_qkd.core.exceptions import InconsistentBudget
from llo_qkd.core.keyrate import certified_k, first_crossing, keyrate_from_added_noise
from llo_qkd.core.noise_budget import total_budget
from llo_qkd.core.noise_models import added_noise, trusted_excess_noise
from llo_qkd.models.schemas import KeyRateBreakdown, NoiseBudget, OutputRow, ScenarioConfig, SweepResult, SweepSpec
from llo_qkd.services.monitor_service import IntensityMonitor
from llo_qkd.utils.parallel import ordered_map

_LOGGER = logging.getLogger(__name__)

NAN = float("nan")


def attack_column(monitored: bool) -> str:
    return ATTACKED_MONITORED_LABEL if monitored else INSECURE_DIAGNOSTIC_LABEL


class SweepService:
    """Evaluates a scenario over a distance grid."""

    def __init__(self, config: ScenarioConfig, spec: SweepSpec, include_eigenvalues: bool = False):
        self.config = config
        self.spec = spec
        self.include_eigenvalues = include_eigenvalues

    def column_names(self) -> List[str]:
        names = [model.value for model in self.spec.models]
        if self.spec.include_attack:
            names.append(attack_column(self.spec.monitored))
        return names

    def _budget(self, config: ScenarioConfig) -> NoiseBudget:
        return conservative_budget(total_budget(config), self.spec.fluctuation)

    def _attacked(self, config: ScenarioConfig, budget: NoiseBudget, distance_km: float) -> KeyRateBreakdown:
        added = added_noise_under_attack(
            budget, config.detector, budget.t, self.spec.attack, distance_km, self.spec.monitored
        )
        return keyrate_from_added_noise(config, added)

    def attacked_k(self, distance_km: float) -> float:
        config = self.config.at_distance(distance_km)
        try:
            return self._attacked(config, self._budget(config), distance_km).k
        except InconsistentBudget:
            return -1.0

    def evaluate_row(self, distance_km: float) -> OutputRow:
        """All requested columns at one distance; a column the measured budget cannot host is NaN."""
        config = self.config.at_distance(distance_km)
        budget = self._budget(config)
        columns: Dict[str, float] = {}
        eigenvalues = {} if self.include_eigenvalues else None

        evaluations: Dict[str, Callable[[], KeyRateBreakdown]] = {
            model.value: (lambda m=model: keyrate_from_added_noise(
                config, added_noise(budget, config.detector, budget.t, m)
            ))
            for model in self.spec.models
        }
        if self.spec.include_attack:
            evaluations[attack_column(self.spec.monitored)] = lambda: self._attacked(config, budget, distance_km)

        for name, evaluate in evaluations.items():
            try:
                result = evaluate()
            except InconsistentBudget as e:
                _LOGGER.warning(f"No {name} key at {distance_km} km: {e}")
                columns[f"k_{name}"] = NAN
                columns[f"key_{name}"] = NAN
                continue
            columns[f"k_{name}"] = result.k
            columns[f"key_{name}"] = result.key
            if eigenvalues is not None:
                eigenvalues[name] = result.lambdas

        try:
            xi_tot_trusted = trusted_excess_noise(budget.xi_tot, budget.xi_error_t, budget.t)
        except InconsistentBudget:
            xi_tot_trusted = NAN

        return OutputRow(
            distance_km=distance_km,
            transmittance=budget.t,
            xi_tot=budget.xi_tot,
            xi_tot_trusted=xi_tot_trusted,
            xi_error_t_over_t=budget.xi_error_t / budget.t,
            columns=columns,
            eigenvalues=eigenvalues,
        )

    def _max_distance(self, rows: List[OutputRow], name: str, k_of_distance: Callable[[float], float]) -> Optional[float]:
        key = f"k_{name}"
        found = first_crossing(
            k_of_distance,
            [row.distance_km for row in rows],
            known=[row.columns[key] for row in rows],
        )
        if found is None:
            _LOGGER.warning(f"No key-rate zero crossing for {name} inside the sweep range")
        return found

    def max_distances(self, rows: List[OutputRow]) -> Dict[str, Optional[float]]:
        """Per-column maximum distance, bisected between the bracketing grid points."""
        found: Dict[str, Optional[float]] = {}
        for model in self.spec.models:
            found[model.value] = self._max_distance(
                rows, model.value, lambda d, m=model: certified_k(self.config, m, d, self.spec.fluctuation)
            )
        if self.spec.include_attack:
            name = attack_column(self.spec.monitored)
            found[name] = self._max_distance(rows, name, self.attacked_k)
        return found

    def check_ordering(self, rows: List[OutputRow]) -> Optional[bool]:
        """K_conv <= K_attacked <= K_trusted at every row, when all three columns exist."""
        needed = {ModelKind.CONVENTIONAL, ModelKind.TRUSTED}
        if not (self.spec.include_attack and self.spec.monitored and needed <= set(self.spec.models)):
            return None
        slack = 1e-12
        for row in rows:
            k_conv = row.columns[f"k_{ModelKind.CONVENTIONAL.value}"]
            k_att = row.columns[f"k_{ATTACKED_MONITORED_LABEL}"]
            k_trusted = row.columns[f"k_{ModelKind.TRUSTED.value}"]
            if any(math.isnan(k) for k in (k_conv, k_att, k_trusted)):
                continue
            if not (k_conv <= k_att + slack and k_att <= k_trusted + slack):
                _LOGGER.warning(f"Key-rate ordering violated at {row.distance_km} km")
                return False
        return True

    def run(self, workers: Optional[int] = None) -> SweepResult:
        distances = self.spec.distances()
        rows = ordered_map(self.evaluate_row, distances, workers or settings.SWEEP_WORKERS)

        alarms = []
        if self.spec.include_attack:
            monitor = IntensityMonitor(self.config.reference.e_r2_bob)
            alarms = [monitor.check_attack(self.spec.attack, d) for d in distances]

        result = SweepResult(
            rows=rows,
            max_distance_km=self.max_distances(rows),
            ordering_ok=self.check_ordering(rows),
            alarms=alarms,
        )
        _LOGGER.info(
            f"Swept {len(rows)} distances from {self.spec.start_km} to {self.spec.stop_km} km; "
            f"max distances {result.max_distance_km}"
        )
        return result
