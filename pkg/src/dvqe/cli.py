"""Command-line entry point: ``dvqe solve | fidelity | remap | brute | uc-build``.

Exit codes: 0 ok, 2 parse, 3 config, 4 numeric, 5 infeasible.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import sys
import zlib
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .circuit_ir import AnsatzSpec, build_monolithic_ansatz, render_text
from .errors import ConfigError, DvqeError
from .hamiltonian import qubo_to_hamiltonian
from .qubo_model import brute_force, build_uc_qubo, load_problem, load_uc, save_problem
from .sampler_select import (
    SelectionConfig,
    UcFilter,
    execute_and_sample,
    histogram_json,
    select_solution,
)
from . import sim_core
from .telegate_remap import TelegateMode, remap, run_stochastic_telegate, verify_equivalence
from .topology import from_config, parse_config
from .trainer import EnergyEvaluator, TrainConfig, train
from .warm_start import InitConfig, warm_start

SOLUTION_FILE = "solution.json"
HISTOGRAM_FILE = "histogram.json"
CONVERGENCE_FILE = "convergence.csv"
CIRCUIT_FILE = "circuit.txt"


def stream_seed(seed: int, name: str) -> list[int]:
    """Entropy for a named random stream derived from the run seed."""
    return [seed & 0xFFFFFFFFFFFFFFFF, zlib.crc32(name.encode())]


@dataclass
class RunConfig:
    problem: str
    mode: str = "monolithic"
    uc: bool = False
    depth: int = 2
    init_type: int = 3
    lr: float = 0.05
    max_iters: int = 200
    rel_tol: float = 1e-3
    qpu_qubit_config: list | None = None
    shots: int = 4000
    seed: int = 0
    telegate_mode: str = "deferred"
    population: int = 20
    meta_iters: int = 50
    output_dir: str | None = None

    def __post_init__(self):
        if self.mode not in ("monolithic", "distributed"):
            raise ConfigError(f"mode must be 'monolithic' or 'distributed', got {self.mode!r}")
        if self.mode == "distributed" and not self.qpu_qubit_config:
            raise ConfigError("distributed mode needs a QPU configuration (--qpus)")
        try:
            TelegateMode(self.telegate_mode)
        except ValueError:
            raise ConfigError(f"unknown telegate mode {self.telegate_mode!r}") from None


@dataclass
class RunResult:
    z: list
    cost: float
    feasible: bool
    converged: bool
    iterations: int
    initial_energy: float
    energies: list = field(repr=False, default_factory=list)
    histogram: dict = field(repr=False, default_factory=dict)
    history_path: str | None = None
    histogram_path: str | None = None


@contextlib.contextmanager
def stage(name: str):
    try:
        yield
    except DvqeError as exc:
        if not hasattr(exc, "stage"):
            exc.stage = name
        raise


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from exc


def load_any(path: str, uc: bool):
    """Returns ``(QuboProblem, UcInstance | None)``."""
    text = _read(path)
    if uc:
        instance = load_uc(text)
        return build_uc_qubo(instance), instance
    return load_problem(text), None


def run_dvqe(cfg: RunConfig) -> RunResult:
    with stage("load"):
        problem, uc = load_any(cfg.problem, cfg.uc)
        H = qubo_to_hamiltonian(problem)
    with stage("topology"):
        spec = AnsatzSpec(problem.n, cfg.depth)
        mono = build_monolithic_ansatz(spec)
        topology = None
        circuit = mono
        if cfg.mode == "distributed":
            topology = from_config(cfg.qpu_qubit_config, problem.n)
            circuit = remap(mono, topology, cfg.telegate_mode)
    evaluator = EnergyEvaluator(circuit, H)
    with stage("init"):
        init = InitConfig(cfg.init_type, cfg.population, cfg.meta_iters, cfg.seed)
        theta0, e0 = warm_start(evaluator, circuit.n_params, init)
    with stage("train"):
        tcfg = TrainConfig(lr=cfg.lr, max_iters=cfg.max_iters, rel_tol=cfg.rel_tol)
        theta, history = train(circuit, H, theta0, tcfg, evaluator)
    with stage("sample"):
        seed = stream_seed(cfg.seed, "sampling")
        if topology is not None and cfg.telegate_mode == TelegateMode.STOCHASTIC.value:
            state = run_stochastic_telegate(mono, topology, theta, stream_seed(cfg.seed, "telegate"))
            hist = dict(sorted(sim_core.sample(state, cfg.shots, seed).items()))
        else:
            hist = execute_and_sample(circuit, theta, cfg.shots, seed)
    with stage("select"):
        sel_cfg = SelectionConfig(cfg.shots, UcFilter.from_instance(uc) if uc else None)
        selection = select_solution(hist, H, sel_cfg)
    report = selection.report(cfg.shots)
    result = RunResult(
        z=report["z"],
        cost=report["cost"],
        feasible=selection.feasible,
        converged=history.converged,
        iterations=history.iterations_used,
        initial_energy=e0,
        energies=list(history.energies),
        histogram=hist,
    )
    if cfg.output_dir is not None:
        with stage("write"):
            out = Path(cfg.output_dir)
            out.mkdir(parents=True, exist_ok=True)
            (out / SOLUTION_FILE).write_text(json.dumps(report, indent=2) + "\n")
            (out / HISTOGRAM_FILE).write_text(histogram_json(hist) + "\n")
            (out / CONVERGENCE_FILE).write_text(history.to_csv())
            (out / CIRCUIT_FILE).write_text(render_text(circuit, topology))
            result.history_path = str(out / CONVERGENCE_FILE)
            result.histogram_path = str(out / HISTOGRAM_FILE)
    with stage("select"):
        selection.require()
    return result


def run_fidelity(n: int, depth: int, qpus, seed: int = 0) -> float:
    topology = from_config(qpus, n)
    theta = np.random.default_rng(stream_seed(seed, "fidelity")).uniform(0.0, 2 * np.pi, n * depth)
    return verify_equivalence(AnsatzSpec(n, depth), topology, theta)


def run_brute(path: str, uc: bool = False):
    problem, _ = load_any(path, uc)
    return brute_force(problem)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dvqe", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="train and sample a VQE for a QUBO or unit-commitment file")
    solve.add_argument("--mode", choices=["monolithic", "distributed"], default="monolithic")
    solve.add_argument("--problem", required=True, metavar="FILE")
    solve.add_argument("--uc", action="store_true", help="FILE is a unit-commitment instance")
    solve.add_argument("--depth", type=int, default=2)
    solve.add_argument("--init", type=int, choices=[1, 2, 3, 4], default=3, dest="init_type")
    solve.add_argument("--lr", type=float, default=0.05)
    solve.add_argument("--max-iters", type=int, default=200)
    solve.add_argument("--rel-tol", type=float, default=1e-3)
    solve.add_argument("--qpus", type=parse_config, default=None, metavar="a,b,c")
    solve.add_argument("--shots", type=int, default=4000)
    solve.add_argument("--seed", type=int, default=0)
    solve.add_argument("--telegate", choices=[m.value for m in TelegateMode], default="deferred")
    solve.add_argument("--pop", type=int, default=20, help="metaheuristic population")
    solve.add_argument("--meta-iters", type=int, default=50, help="metaheuristic iterations")
    solve.add_argument("--out", default=None, metavar="DIR")

    fid = sub.add_parser("fidelity", help="compare monolithic and distributed ansatz states")
    fid.add_argument("--n", type=int, required=True)
    fid.add_argument("--depth", type=int, required=True)
    fid.add_argument("--qpus", type=parse_config, required=True, metavar="a,b,c")
    fid.add_argument("--seed", type=int, default=0)

    rem = sub.add_parser("remap", help="print the distributed ansatz circuit")
    size = rem.add_mutually_exclusive_group(required=True)
    size.add_argument("--n", type=int)
    size.add_argument("--problem", metavar="FILE")
    rem.add_argument("--uc", action="store_true")
    rem.add_argument("--depth", type=int, default=2)
    rem.add_argument("--qpus", type=parse_config, required=True, metavar="a,b,c")

    brute = sub.add_parser("brute", help="exhaustive optimum of a problem file")
    brute.add_argument("--problem", required=True, metavar="FILE")
    brute.add_argument("--uc", action="store_true")

    ucb = sub.add_parser("uc-build", help="convert a unit-commitment file to QUBO JSON")
    ucb.add_argument("--uc", required=True, metavar="FILE", dest="uc_file")
    ucb.add_argument("--out", default=None, metavar="FILE")
    return parser


def _dispatch(args) -> int:
    if args.command == "solve":
        cfg = RunConfig(
            problem=args.problem,
            mode=args.mode,
            uc=args.uc,
            depth=args.depth,
            init_type=args.init_type,
            lr=args.lr,
            max_iters=args.max_iters,
            rel_tol=args.rel_tol,
            qpu_qubit_config=args.qpus,
            shots=args.shots,
            seed=args.seed,
            telegate_mode=args.telegate,
            population=args.pop,
            meta_iters=args.meta_iters,
            output_dir=args.out,
        )
        result = run_dvqe(cfg)
        print(json.dumps({
            "z": result.z,
            "cost": result.cost,
            "converged": result.converged,
            "iterations": result.iterations,
            "history": result.history_path,
            "histogram": result.histogram_path,
        }))
    elif args.command == "fidelity":
        print(f"{run_fidelity(args.n, args.depth, args.qpus, args.seed):.12f}")
    elif args.command == "remap":
        n = args.n if args.n is not None else load_any(args.problem, args.uc)[0].n
        topology = from_config(args.qpus, n)
        circuit = remap(build_monolithic_ansatz(AnsatzSpec(n, args.depth)), topology)
        sys.stdout.write(render_text(circuit, topology))
    elif args.command == "brute":
        x, c = run_brute(args.problem, args.uc)
        print(json.dumps({"best_x": [int(b) for b in x], "best_cost": c}))
    elif args.command == "uc-build":
        text = save_problem(build_uc_qubo(load_uc(_read(args.uc_file)))) + "\n"
        if args.out:
            Path(args.out).write_text(text)
        else:
            sys.stdout.write(text)
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return ConfigError.exit_code if exc.code else 0
    try:
        return _dispatch(args)
    except DvqeError as exc:
        where = getattr(exc, "stage", args.command)
        print(f"dvqe: error [{where}]: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
