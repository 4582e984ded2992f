"""Command-line front end.

Subcommands
-----------
fidelity      cloning fidelity vs time for one input qubit
photons       clone-mode and total photon means vs time
avg-fidelity  Bloch-sphere averaged fidelity for a fixed bias field vs none
verify        run the built-in cross-validation suite
preset        run a canned figure configuration (fig2 ... fig6b)

Every option can also come from a plain key=value config file (--config);
explicit flags win over the file, the file wins over defaults.  CSV output is
deterministic: same configuration, byte-identical file.

Exit codes: 0 success, 1 invalid configuration, 2 verification failure.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import analytic
from .dynamics import Propagator, evolve_series
from .hilbert import StateVector, enumerate_basis, initial_state
from .model import QubitState, build_hamiltonian, primed_bias
from .observables import (
    bloch_averaged_series,
    convert_state_modes,
    fidelity,
    mean_photons,
    phase_average,
    photon_probabilities,
    theta_averaged_series,
)

__all__ = [
    "ConfigError",
    "RunConfig",
    "PRESETS",
    "cmd_fidelity",
    "cmd_photons",
    "cmd_avg_fidelity",
    "cmd_verify",
    "main",
]


class ConfigError(ValueError):
    """Invalid run configuration (maps to exit code 1)."""


@dataclass(frozen=True)
class RunConfig:
    """Fully resolved parameters of one CLI run."""

    command: str
    n_atoms: int
    bias_mode: str  # "none" | "matched" | "lab"
    bias_strength: float
    bias_lab: tuple[float, float]
    qubit: QubitState | None  # None = average over the Bloch sphere
    tau_max: float
    tau_points: int
    phase_grid: int
    bloch_grid: tuple[int, int]
    method: str
    output_path: str | None


_DEFAULTS = {
    "atoms": 1,
    "bias": "none",
    "alpha_re": 1.0,
    "alpha_im": 0.0,
    "beta_re": 0.0,
    "beta_im": 0.0,
    "average": False,
    "tau_max": 12.0,
    "tau_points": 601,
    "phase_grid": 4,
    "bloch_grid": "16,16",
    "method": "spectral",
    "out": None,
}

_COERCERS = {
    "atoms": int,
    "bias": str,
    "alpha_re": float,
    "alpha_im": float,
    "beta_re": float,
    "beta_im": float,
    "average": lambda s: str(s).strip().lower() in ("1", "true", "yes", "on"),
    "tau_max": float,
    "tau_points": int,
    "phase_grid": int,
    "bloch_grid": str,
    "method": str,
    "out": str,
}

PRESETS = {
    "fig2": {
        "command": "fidelity", "atoms": 1, "bias": "matched:3",
        "tau_max": 12.0, "tau_points": 1201,
    },
    "fig3a": {
        "command": "photons", "atoms": 1, "bias": "none",
        "tau_max": 12.0, "tau_points": 1201,
    },
    "fig3b": {
        "command": "photons", "atoms": 1, "bias": "matched:3",
        "tau_max": 12.0, "tau_points": 1201,
    },
    "fig4": {
        "command": "fidelity", "atoms": 2, "bias": "matched:3",
        "tau_max": 12.0, "tau_points": 601,
    },
    "fig5a": {
        "command": "photons", "atoms": 2, "bias": "none",
        "tau_max": 12.0, "tau_points": 601,
    },
    "fig5b": {
        "command": "photons", "atoms": 2, "bias": "matched:3",
        "tau_max": 12.0, "tau_points": 601,
    },
    "fig6a": {
        "command": "avg-fidelity", "atoms": 1, "bias": "lab:0,8",
        "tau_max": 6.0, "tau_points": 241,
    },
    "fig6b": {
        "command": "photons", "atoms": 1, "bias": "lab:0,8", "average": True,
        "tau_max": 6.0, "tau_points": 241,
    },
}


def _parse_bias(text: str) -> tuple[str, float, tuple[float, float]]:
    text = str(text).strip()
    if text == "none":
        return "none", 0.0, (0.0, 0.0)
    if text.startswith("matched:"):
        try:
            strength = float(text.split(":", 1)[1])
        except ValueError:
            raise ConfigError(f"bad matched bias {text!r}") from None
        if strength < 0:
            raise ConfigError(f"matched bias strength must be >= 0, got {strength}")
        return "matched", strength, (0.0, 0.0)
    if text.startswith("lab:"):
        parts = text.split(":", 1)[1].split(",")
        if len(parts) != 2:
            raise ConfigError(f"lab bias needs two couplings, got {text!r}")
        try:
            g1, g2 = float(parts[0]), float(parts[1])
        except ValueError:
            raise ConfigError(f"bad lab bias {text!r}") from None
        return "lab", 0.0, (g1, g2)
    raise ConfigError(
        f"bias must be 'none', 'matched:<s>' or 'lab:<g1>,<g2>', got {text!r}"
    )


def _parse_bloch_grid(text: str) -> tuple[int, int]:
    parts = str(text).split(",")
    if len(parts) != 2:
        raise ConfigError(f"bloch grid needs two orders, got {text!r}")
    try:
        chi, phi = int(parts[0]), int(parts[1])
    except ValueError:
        raise ConfigError(f"bad bloch grid {text!r}") from None
    return chi, phi


def _read_config_file(path: str) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path!r}: {exc}") from None
    entries = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, value = line.split("=", 1)
        key = key.strip().replace("-", "_")
        if key not in _COERCERS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        try:
            entries[key] = _COERCERS[key](value.strip())
        except ValueError:
            raise ConfigError(
                f"{path}:{lineno}: bad value for {key!r}: {value.strip()!r}"
            ) from None
    return entries


def _build_config(command: str, merged: dict) -> RunConfig:
    n_atoms = int(merged["atoms"])
    if n_atoms < 1:
        raise ConfigError(f"atoms must be >= 1, got {n_atoms}")
    bias_mode, strength, lab = _parse_bias(merged["bias"])
    tau_max = float(merged["tau_max"])
    if tau_max <= 0:
        raise ConfigError(f"tau-max must be > 0, got {tau_max}")
    tau_points = int(merged["tau_points"])
    if tau_points < 2:
        raise ConfigError(f"tau-points must be >= 2, got {tau_points}")
    phase_grid = int(merged["phase_grid"])
    if phase_grid < 2:
        raise ConfigError(f"phase-grid must be >= 2, got {phase_grid}")
    bloch_grid = _parse_bloch_grid(merged["bloch_grid"])
    if bloch_grid[0] < 4 or bloch_grid[1] < 4:
        raise ConfigError(f"bloch-grid orders must be >= 4, got {bloch_grid}")
    method = str(merged["method"])
    if method not in ("spectral", "rk5"):
        raise ConfigError(f"method must be 'spectral' or 'rk5', got {method!r}")
    if command == "avg-fidelity" or merged.get("average"):
        qubit = None
    else:
        try:
            qubit = QubitState(
                complex(merged["alpha_re"], merged["alpha_im"]),
                complex(merged["beta_re"], merged["beta_im"]),
            )
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
    return RunConfig(
        command=command,
        n_atoms=n_atoms,
        bias_mode=bias_mode,
        bias_strength=strength,
        bias_lab=lab,
        qubit=qubit,
        tau_max=tau_max,
        tau_points=tau_points,
        phase_grid=phase_grid,
        bloch_grid=bloch_grid,
        method=method,
        output_path=merged.get("out"),
    )


def _tau_grid(config: RunConfig) -> np.ndarray:
    return np.linspace(0.0, config.tau_max, config.tau_points)


def _resolve_primed(config: RunConfig) -> tuple[complex, complex]:
    if config.bias_mode == "none":
        return (0.0, 0.0)
    if config.bias_mode == "matched":
        return (0.0, complex(config.bias_strength))
    assert config.qubit is not None
    return primed_bias(config.qubit, config.bias_lab)


def _write_csv(path: str | None, header: list[str], columns: list) -> None:
    cols = [np.atleast_1d(np.asarray(c, dtype=float)) for c in columns]
    lines = [",".join(header)]
    for row in zip(*cols):
        lines.append(",".join(f"{v:.11e}" for v in row))
    text = "\n".join(lines) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def cmd_fidelity(config: RunConfig) -> int:
    """Fidelity vs time; adds the zero-bias reference column when biased."""
    if config.qubit is None:
        raise ConfigError("fidelity needs an explicit qubit; use avg-fidelity "
                          "for the sphere average")
    taus = _tau_grid(config)
    table = theta_averaged_series(
        config.n_atoms, _resolve_primed(config), taus,
        phase_grid=config.phase_grid, method=config.method,
    )
    header = ["tau", "fidelity"]
    columns = [taus, fidelity(table)]
    if config.bias_mode != "none":
        reference = theta_averaged_series(
            config.n_atoms, (0.0, 0.0), taus,
            phase_grid=config.phase_grid, method=config.method,
        )
        header.append("fidelity_nobias")
        columns.append(fidelity(reference))
    _write_csv(config.output_path, header, columns)
    return 0


def cmd_photons(config: RunConfig) -> int:
    """Clone-mode and total photon means vs time."""
    taus = _tau_grid(config)
    if config.qubit is None:
        if config.bias_mode == "lab":
            table = bloch_averaged_series(
                config.n_atoms, config.bias_lab, taus,
                phase_grid=config.phase_grid,
                quad_chi=config.bloch_grid[0], quad_phi=config.bloch_grid[1],
                method=config.method,
            )
        else:
            primed = (0.0, complex(config.bias_strength))
            table = bloch_averaged_series(
                config.n_atoms, primed, taus,
                phase_grid=config.phase_grid,
                quad_chi=config.bloch_grid[0], quad_phi=config.bloch_grid[1],
                method=config.method, fixed_primed=True,
            )
    else:
        table = theta_averaged_series(
            config.n_atoms, _resolve_primed(config), taus,
            phase_grid=config.phase_grid, method=config.method,
        )
    n_right, n_all = mean_photons(table)
    _write_csv(config.output_path, ["tau", "n_right", "n_all"],
               [taus, n_right, n_all])
    return 0


def cmd_avg_fidelity(config: RunConfig) -> int:
    """Bloch-averaged fidelity for the configured bias field and for none.

    bias_mode "lab" holds the couple fixed in the lab frame (the primed pair
    then varies over the sphere); "matched" holds the primed pair itself
    fixed, under which the average is trivial by universality.
    """
    if config.bias_mode == "none":
        raise ConfigError("avg-fidelity compares a bias field against none; "
                          "pick matched:<s> or lab:<g1>,<g2>")
    taus = _tau_grid(config)
    if config.bias_mode == "lab":
        couple, fixed = config.bias_lab, False
    else:
        couple, fixed = (0.0, complex(config.bias_strength)), True
    biased = bloch_averaged_series(
        config.n_atoms, couple, taus,
        phase_grid=config.phase_grid,
        quad_chi=config.bloch_grid[0], quad_phi=config.bloch_grid[1],
        method=config.method, fixed_primed=fixed,
    )
    reference = bloch_averaged_series(
        config.n_atoms, (0.0, 0.0), taus,
        phase_grid=config.phase_grid,
        quad_chi=config.bloch_grid[0], quad_phi=config.bloch_grid[1],
        method=config.method, fixed_primed=True,
    )
    _write_csv(config.output_path,
               ["tau", "fidelity_avg", "fidelity_avg_nobias"],
               [taus, fidelity(biased), fidelity(reference)])
    return 0


def _random_qubit(rng) -> QubitState:
    v = rng.normal(size=4)
    a = complex(v[0], v[1])
    b = complex(v[2], v[3])
    norm = np.sqrt(abs(a) ** 2 + abs(b) ** 2)
    return QubitState(a / norm, b / norm)


def _verify_checks() -> list[tuple[str, bool, str]]:
    """The built-in cross-validation suite behind `vcloner verify`."""
    checks = []
    rng = np.random.default_rng(20250815)
    taus = np.linspace(0.0, 12.0, 121)

    # closed form vs spectral, no bias, lab frame, several qubits and phases
    basis7 = analytic.single_atom_basis(False)
    prop7 = Propagator(build_hamiltonian(basis7, (0.0, 0.0)))
    worst = 0.0
    for qubit in (QubitState(1, 0), QubitState(0.6, 0.8j), _random_qubit(rng)):
        for theta in (0.0, 2.1):
            psi0 = analytic.amplitudes_unbiased(qubit, theta, 0.0)
            amps = prop7.series(psi0.amplitudes, taus)
            for i, t in enumerate(taus):
                ref = analytic.amplitudes_unbiased(qubit, theta, float(t))
                worst = max(worst, float(np.max(np.abs(amps[:, i] - ref.amplitudes))))
    checks.append(("closed form (no bias) vs spectral", worst <= 1e-8,
                   f"max amplitude deviation {worst:.2e}"))

    # closed form vs spectral, matched bias G2' = 3, primed frame
    basis9 = analytic.single_atom_basis(True)
    prop9 = Propagator(build_hamiltonian(basis9, (0.0, 3.0)))
    worst = 0.0
    for theta in (0.0, 2.1):
        psi0 = initial_state(basis9, [theta])
        amps = prop9.series(psi0.amplitudes, taus)
        for i, t in enumerate(taus):
            ref = analytic.amplitudes_biased(3.0, theta, float(t))
            worst = max(worst, float(np.max(np.abs(amps[:, i] - ref.amplitudes))))
    checks.append(("closed form (matched bias) vs spectral", worst <= 1e-8,
                   f"max amplitude deviation {worst:.2e}"))

    # phase-averaged table vs its closed form
    table = theta_averaged_series(1, (0.0, 0.0), taus, phase_grid=4)
    ref = analytic.theta_avg_probs_unbiased(taus)
    dev = max(
        float(np.max(np.abs(np.asarray(table.get(*key)) - np.asarray(ref.get(*key)))))
        for key in ((2, 0), (1, 1), (0, 1), (1, 0))
    )
    stray = float(np.max(np.abs(np.asarray(table.get(0, 2)))))
    drift = float(np.max(np.abs(np.asarray(table.total()) - 1.0)))
    ok = dev <= 1e-8 and stray <= 1e-10 and drift <= 1e-10
    checks.append(("phase-averaged table vs closed form", ok,
                   f"max formula deviation {dev:.2e}, stray weight {stray:.2e}, "
                   f"total-1 {drift:.2e}"))

    # Rabi pair identities
    worst = 0.0
    for g2p in rng.uniform(0.01, 20.0, size=100):
        pair = analytic.rabi_pair(float(g2p))
        worst = max(worst, abs(pair.omega1 * pair.omega2 - 2.0 * g2p))
        worst = max(
            worst,
            abs(pair.omega1**2 + pair.omega2**2 - (2.0 * g2p**2 + 4.0)),
        )
    checks.append(("Rabi frequency identities", worst <= 1e-10,
                   f"max identity residual {worst:.2e}"))

    # universality: lab-frame route is qubit independent and matches the formula
    short = np.linspace(0.0, 12.0, 61)
    curves = []
    for qubit in [QubitState(1, 0)] + [_random_qubit(rng) for _ in range(4)]:
        def per_phase(phases, qubit=qubit):
            psi0 = analytic.amplitudes_unbiased(qubit, phases[0], 0.0)
            amps = prop7.series(psi0.amplitudes, short)
            values = np.empty(len(short))
            for i in range(len(short)):
                rotated = convert_state_modes(
                    StateVector(basis7, amps[:, i]), qubit
                )
                values[i] = fidelity(photon_probabilities(rotated))
            return values
        curves.append(phase_average(per_phase, 1, grid_m=4))
    curves = np.asarray(curves)
    spread = float(np.max(np.ptp(curves, axis=0)))
    formula = float(np.max(np.abs(curves - analytic.fidelity_unbiased(short))))
    ok = spread <= 1e-9 and formula <= 1e-8
    checks.append(("universality of the unbiased fidelity", ok,
                   f"qubit spread {spread:.2e}, formula deviation {formula:.2e}"))

    # structural zeros with G1' = 0
    worst = 0.0
    for n_atoms, key in ((1, (0, 2)), (2, (0, 3))):
        for g2p in (0.0, 3.0, 8.0):
            table = theta_averaged_series(n_atoms, (0.0, g2p), taus, phase_grid=4)
            worst = max(worst, float(np.max(np.asarray(table.get(*key)))))
    checks.append(("unreachable photon configurations stay empty",
                   worst <= 1e-10, f"max structural-zero weight {worst:.2e}"))

    # two-atom fidelity: general formula vs the reduced five-term form
    worst = 0.0
    for g2p in (0.0, 3.0):
        table = theta_averaged_series(2, (0.0, g2p), taus, phase_grid=4)
        general = np.asarray(fidelity(table))
        reduced = 1.0 - (
            np.asarray(table.get(2, 1)) / 3.0
            + 2.0 * np.asarray(table.get(1, 2)) / 3.0
            + 0.5 * np.asarray(table.get(1, 1))
            + np.asarray(table.get(0, 1))
            + np.asarray(table.get(0, 2))
        )
        worst = max(worst, float(np.max(np.abs(general - reduced))))
    checks.append(("two-atom fidelity identity", worst <= 1e-10,
                   f"max formula difference {worst:.2e}"))

    # rk5 vs spectral, plus norm drift, across the paper configurations
    grid20 = np.linspace(0.0, 20.0, 81)
    worst_diff = 0.0
    worst_drift = 0.0
    for n_atoms in (1, 2):
        for g2p in (0.0, 3.0, 8.0):
            basis = enumerate_basis(n_atoms, n_atoms + 1, include_metastable=True)
            ham = build_hamiltonian(basis, (0.0, g2p))
            psi0 = initial_state(basis, [0.9, 2.1][:n_atoms])
            rk_states = evolve_series(ham, psi0, grid20, method="rk5")
            sp_amps = Propagator(ham).series(psi0.amplitudes, grid20)
            for i, state in enumerate(rk_states):
                worst_diff = max(worst_diff, float(np.max(np.abs(
                    state.amplitudes - sp_amps[:, i]))))
                worst_drift = max(worst_drift, abs(state.norm() - 1.0))
    ok = worst_diff <= 1e-6 and worst_drift <= 1e-9
    checks.append(("rk5 vs spectral over tau <= 20", ok,
                   f"max amplitude difference {worst_diff:.2e}, "
                   f"max norm drift {worst_drift:.2e}"))

    # spectral norm conservation and composition
    basis = enumerate_basis(2, 3, include_metastable=True)
    ham = build_hamiltonian(basis, (0.0, 8.0))
    prop = Propagator(ham)
    psi0 = initial_state(basis, [0.3, 1.7])
    one = prop.advance(psi0.amplitudes, 1.3)
    two = prop.advance(one, 2.1)
    direct = prop.advance(psi0.amplitudes, 3.4)
    compose = float(np.max(np.abs(two - direct)))
    norm = abs(float(np.linalg.norm(direct)) - 1.0)
    ok = compose <= 1e-10 and norm <= 1e-10
    checks.append(("spectral composition and norm", ok,
                   f"composition gap {compose:.2e}, norm drift {norm:.2e}"))
    return checks


def cmd_verify(_config: RunConfig | None = None) -> int:
    """Run the cross-validation suite; exit 2 when any check fails."""
    checks = _verify_checks()
    failed = 0
    for name, ok, detail in checks:
        status = "PASS" if ok else "FAIL"
        failed += 0 if ok else 1
        print(f"{status}  {name}: {detail}")
    print(f"{len(checks) - failed}/{len(checks)} checks passed")
    return 0 if failed == 0 else 2


class _Parser(argparse.ArgumentParser):
    # spec reserves exit code 2 for verification failures
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _add_common(parser: argparse.ArgumentParser, with_average: bool) -> None:
    sup = argparse.SUPPRESS
    parser.add_argument("--config", default=sup,
                        help="key=value file; explicit flags win")
    parser.add_argument("--atoms", type=int, default=sup)
    parser.add_argument("--bias", default=sup,
                        help="none | matched:<s> | lab:<g1>,<g2>")
    parser.add_argument("--alpha-re", dest="alpha_re", type=float, default=sup)
    parser.add_argument("--alpha-im", dest="alpha_im", type=float, default=sup)
    parser.add_argument("--beta-re", dest="beta_re", type=float, default=sup)
    parser.add_argument("--beta-im", dest="beta_im", type=float, default=sup)
    if with_average:
        parser.add_argument("--average", action="store_true", default=sup,
                            help="average over input qubits on the sphere")
    parser.add_argument("--tau-max", dest="tau_max", type=float, default=sup)
    parser.add_argument("--tau-points", dest="tau_points", type=int, default=sup)
    parser.add_argument("--phase-grid", dest="phase_grid", type=int, default=sup)
    parser.add_argument("--bloch-grid", dest="bloch_grid", default=sup,
                        help="Gauss-Legendre and azimuthal orders, e.g. 16,16")
    parser.add_argument("--method", choices=("spectral", "rk5"), default=sup)
    parser.add_argument("--out", default=sup, help="output CSV path")


def _build_parser() -> _Parser:
    parser = _Parser(prog="vcloner",
                     description="cavity-QED qubit cloning simulator")
    sub = parser.add_subparsers(dest="command", required=True)
    _add_common(sub.add_parser("fidelity", help="fidelity vs time"), False)
    _add_common(sub.add_parser("photons", help="photon means vs time"), True)
    _add_common(sub.add_parser("avg-fidelity",
                               help="Bloch-averaged fidelity vs time"), False)
    sub.add_parser("verify", help="run the cross-validation suite")
    preset = sub.add_parser("preset", help="run a canned figure configuration")
    preset.add_argument("name", choices=sorted(PRESETS))
    preset.add_argument("--out", default=argparse.SUPPRESS)
    return parser


_DISPATCH = {
    "fidelity": cmd_fidelity,
    "photons": cmd_photons,
    "avg-fidelity": cmd_avg_fidelity,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "verify":
            return cmd_verify()
        if args.command == "preset":
            spec = dict(PRESETS[args.name])
            command = spec.pop("command")
            merged = dict(_DEFAULTS)
            merged.update(spec)
            merged["out"] = getattr(args, "out", f"{args.name}.csv")
            return _DISPATCH[command](_build_config(command, merged))
        provided = {k: v for k, v in vars(args).items() if k != "command"}
        merged = dict(_DEFAULTS)
        if "config" in provided:
            merged.update(_read_config_file(provided.pop("config")))
        merged.update(provided)
        return _DISPATCH[args.command](_build_config(args.command, merged))
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
