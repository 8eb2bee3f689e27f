from dataclasses import dataclass

from src.application.dtos.experiment_dtos import ComplexValue, ObservableInfo
from src.domain.entities.observable import Observable


@dataclass
class ListObservablesUseCase:
    """Describe the built-in observables with their declared bounds."""

    def execute(self) -> list[ObservableInfo]:
        catalogue = [
            ("constant", "any", Observable.constant(1.0)),
            ("torus-character", "torus", Observable.torus_character([1])),
            ("heis-horizontal", "heisenberg", Observable.heis_horizontal(1, 0)),
            ("heis-theta", "heisenberg", Observable.heis_theta()),
        ]
        return [
            ObservableInfo(
                kind=kind,
                model=model,
                example=obs.describe(),
                lipschitz_bound=obs.lipschitz_bound,
                sup_bound=obs.sup_bound,
                analytic_mean=ComplexValue.of(complex(obs.analytic_mean or 0.0)),
            )
            for kind, model, obs in catalogue
        ]
