"""Distributed variational quantum eigensolver simulator for QUBO problems."""

from importlib import resources

from .circuit_ir import AnsatzSpec, Circuit, Gate, bind_and_run, build_monolithic_ansatz
from .hamiltonian import IsingHamiltonian, energy_of_bitstring, qubo_to_hamiltonian
from .qubo_model import QuboProblem, UcInstance, brute_force, build_uc_qubo, cost
from .telegate_remap import TelegateMode, remap, verify_equivalence
from .topology import Topology, from_config, greedy_allocate
from .trainer import EnergyEvaluator, TrainConfig, train
from .warm_start import InitConfig, warm_start

__version__ = "0.1.0"


def data_path(name: str) -> str:
    """Path of a bundled instance, e.g. ``data_path("example2.json")``."""
    return str(resources.files(__package__) / "data" / name)


__all__ = [
    "AnsatzSpec", "Circuit", "EnergyEvaluator", "Gate", "InitConfig", "IsingHamiltonian",
    "QuboProblem", "TelegateMode", "Topology", "TrainConfig", "UcInstance",
    "bind_and_run", "brute_force", "build_monolithic_ansatz", "build_uc_qubo", "cost",
    "data_path", "energy_of_bitstring", "from_config", "greedy_allocate",
    "qubo_to_hamiltonian", "remap", "train", "verify_equivalence", "warm_start",
]
