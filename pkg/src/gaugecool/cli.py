"""Command-line front end: evolution runs, convergence studies, and checks.

Four subcommands:

* ``evolve``   -- noisy Trotter evolution with optional per-step cooling,
  one CSV row per step (fidelity against the ideal trajectory).
* ``converge`` -- a single noisy step followed by cooling sweeps, one CSV
  row per sweep (gauge-invariant overlap and its deficit).
* ``kl-audit`` -- the error-detection / recovery bookkeeping tables as a
  section-tagged CSV.
* ``check``    -- invariant suites with a pass/fail report per line;
  exit 0 iff everything passes.

All CSV output is deterministic: fixed header, 12 significant digits,
LF line endings, no timestamps.  Exit codes: 0 success, 1 check failure,
2 usage error.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .cooling import gi_overlap, iterative_cooling
from .dynamics import (
    NoiseSpec,
    TrotterConfig,
    apply_noise_all_edges,
    fidelity,
    trotter_step,
    trotter_step_state,
)
from .hamiltonian import (
    electric_hamiltonian,
    haar_mc_oracle,
    magnetic_hamiltonian,
    magnetic_plaquette_matrix,
)
from .klaudit import (
    convention_audit,
    detection_check,
    kl_product,
    multiplicity_map,
    residual_pauli_weights,
    wigner_eckart_residual,
)
from .lattice import gauge_casimir, vacuum_state
from .tdesign import (
    binary_octahedral_design,
    discrete_syndrome_check,
    embed_unitary,
    qft_kernel_check,
    read_design,
    required_design_strength,
    tdesign_deviations,
    truncated_qft,
)

__all__ = ["RunConfig", "main", "build_parser"]

_NOISE_FLAGS = {"depolarizing": "depolarizing", "amplitude-damping": "amplitude_damping"}


@dataclass(frozen=True)
class RunConfig:
    """Flags of an evolution/convergence run, with the reference defaults."""

    noise: str = "depolarizing"
    rate: float = 0.005
    g2: float = 1.0
    total_time: float = 3.0
    n_steps: int = 30
    cool: bool = False
    tol: float = 1e-5
    max_sweeps: int = 10
    out: str | None = None

    def noise_spec(self) -> NoiseSpec:
        return NoiseSpec(_NOISE_FLAGS[self.noise], self.rate)


def _fmt(x: float) -> str:
    """12 significant digits, '.' decimal separator."""
    return f"{float(x):.12g}"


def _write_csv(path: str | None, header: str, rows: list[str]) -> None:
    text = "\n".join([header, *rows]) + "\n"
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="ascii", newline="\n") as fh:
            fh.write(text)


# ---------------------------------------------------------------------------
# evolve / converge


def cmd_evolve(cfg: RunConfig) -> int:
    """Trotter steps with noise after each one; cooling if requested.

    The noiseless reference state is advanced in parallel so the fidelity
    column always compares against the ideal trajectory at the same time.
    """
    trotter = TrotterConfig(g2=cfg.g2, total_time=cfg.total_time, n_steps=cfg.n_steps)
    noise = cfg.noise_spec()
    psi = vacuum_state()
    rho = np.outer(psi, psi.conj())
    rows = []
    for step in range(1, cfg.n_steps + 1):
        psi = trotter_step_state(psi, trotter)
        rho = trotter_step(rho, trotter)
        rho = apply_noise_all_edges(rho, noise)
        sweeps = 0
        if cfg.cool:
            rho, report = iterative_cooling(rho, tol=cfg.tol, max_sweeps=cfg.max_sweeps)
            sweeps = report.sweeps_used
        rows.append(
            f"{step},{_fmt(step * trotter.dt)},{_fmt(fidelity(rho, psi))},"
            f"{_fmt(gi_overlap(rho))},{sweeps}"
        )
    _write_csv(cfg.out, "step,time,fidelity,gi_overlap,sweeps_used", rows)
    return 0


def cmd_converge(cfg: RunConfig) -> int:
    """One noisy Trotter step, then cooling sweeps; one row per sweep.

    Sweep 0 is the state before any cooling.  The step size is fixed at 0.1,
    the setting the reference per-sweep overlap table was produced with.
    """
    trotter = TrotterConfig(g2=cfg.g2, total_time=0.1, n_steps=1)
    psi = vacuum_state()
    rho = np.outer(psi, psi.conj())
    rho = trotter_step(rho, trotter)
    rho = apply_noise_all_edges(rho, cfg.noise_spec())
    _, report = iterative_cooling(rho, tol=cfg.tol, max_sweeps=cfg.max_sweeps)
    rows = [
        f"{sweep},{_fmt(overlap)},{_fmt(1.0 - overlap)}"
        for sweep, overlap in enumerate(report.overlaps)
    ]
    _write_csv(cfg.out, "sweep,gi_overlap,deficit", rows)
    return 0


# ---------------------------------------------------------------------------
# kl-audit


def cmd_kl_audit(out: str | None) -> int:
    """Section-tagged CSV: detection norms, pair products, residual weights."""
    rows = []
    for pauli in ("X", "Y", "Z"):
        for edge in range(4):
            rows.append(f"detection,{pauli}_{edge},{_fmt(detection_check(pauli, edge))},,,")
    for a, b in ((0, 1), (2, 3)):
        prod = kl_product(multiplicity_map("Z", a), multiplicity_map("Z", b))
        flat = np.real_if_close(prod, tol=1e3).astype(float).ravel()
        rows.append(f"kl,Z{a}-Z{b}," + ",".join(_fmt(v) for v in flat))
    table = residual_pauli_weights(reference_edge=0, m_target=0)
    for label, *weights in table.rows:
        rows.append(f"residual,{label}," + ",".join(_fmt(w) for w in weights))
    _write_csv(out, "section,label,v1,v2,v3,v4", rows)
    return 0


# ---------------------------------------------------------------------------
# check suites


def _suite_hamiltonian(seed: int) -> list[tuple[str, float, float]]:
    checks = []
    hb = magnetic_hamiltonian(1.0)
    he = electric_hamiltonian(1.0)
    checks.append(("magnetic term Hermitian", float(np.max(np.abs(hb - hb.conj().T))), 1e-12))
    for v in range(4):
        c = gauge_casimir(v)
        checks.append(
            (f"[H_B, Casimir] vertex {v}", float(np.max(np.abs(hb @ c - c @ hb))), 1e-10)
        )
        checks.append(
            (f"[H_E, Casimir] vertex {v}", float(np.max(np.abs(he @ c - c @ he))), 1e-12)
        )
    est = haar_mc_oracle(20000, np.random.default_rng(seed))
    checks.append(
        (
            "plaquette matrix vs 2e4-sample Haar average",
            float(np.max(np.abs(est - magnetic_plaquette_matrix()))),
            0.15,
        )
    )
    return checks


def _load_design(design_file: str | None):
    if design_file is None:
        return binary_octahedral_design()
    return read_design(design_file, claimed_t=3)


def _suite_tdesign(design_file: str | None) -> list[tuple[str, float, float]]:
    checks = []
    design = _load_design(design_file)
    devs = tdesign_deviations(design, design.claimed_t)
    worst = max(devs, key=devs.get)
    checks.append(
        (
            f"design strength t={design.claimed_t}, worst bidegree ({worst[0]},{worst[1]})",
            devs[worst],
            1e-9,
        )
    )
    for v in range(4):
        checks.append(
            (
                f"syndrome operators from the group average, vertex {v}",
                discrete_syndrome_check(design, v),
                1e-9,
            )
        )
    checks.append(
        (
            "required strength, syndrome map (k=2, k_out=1, j=1/2)",
            float(required_design_strength(2, 1, Fraction(1, 2)) - 3),
            0.5,
        )
    )
    checks.append(
        (
            "required strength, syndrome map (k=2, k_out=1, j=1)",
            float(required_design_strength(2, 1, 1) - 6),
            0.5,
        )
    )
    return checks


def _suite_qft(design_file: str | None) -> list[tuple[str, float, float]]:
    checks = []
    design = _load_design(design_file)
    for j_cut in (Fraction(1, 2), Fraction(1)):
        qft = truncated_qft(design, j_cut)
        gram = qft.w @ qft.w.conj().T
        iso = float(np.max(np.abs(gram - np.eye(qft.d_out))))
        checks.append((f"Fourier rows orthonormal, j_cut={j_cut}", iso, 1e-9))
        checks.append(
            (f"character kernel identity, j_cut={j_cut}", qft_kernel_check(design, j_cut), 1e-9)
        )
        if iso <= 1e-9:
            u = embed_unitary(qft)
            checks.append(
                (
                    f"embedded matrix unitary, j_cut={j_cut}",
                    float(np.max(np.abs(u @ u.conj().T - np.eye(qft.n_t)))),
                    1e-9,
                )
            )
            checks.append(
                (
                    f"embedding preserves the Fourier rows, j_cut={j_cut}",
                    float(np.max(np.abs(u[: qft.d_out] - qft.w))),
                    0.0,
                )
            )
    return checks


def _suite_detection() -> list[tuple[str, float, float]]:
    checks = []
    for pauli in ("X", "Y", "Z"):
        for edge in range(4):
            checks.append(
                (f"undetected singlet reach of {pauli} on edge {edge}",
                 detection_check(pauli, edge), 1e-12)
            )
    for q in (-1, 0, 1):
        for edge in range(4):
            checks.append(
                (f"tensor factorization of the q={q:+d} component, edge {edge}",
                 wigner_eckart_residual(q, edge), 1e-10)
            )
    report = convention_audit()
    checks.append(
        ("singlet labeling matches the reference pair product",
         0.0 if report.matches_reference else 1.0, 0.5)
    )
    return checks


_SUITES = ("hamiltonian", "tdesign", "qft", "detection", "all")


def cmd_check(suite: str, seed: int, design_file: str | None) -> int:
    checks: list[tuple[str, float, float]] = []
    if suite in ("hamiltonian", "all"):
        checks += _suite_hamiltonian(seed)
    if suite in ("tdesign", "all"):
        checks += _suite_tdesign(design_file)
    if suite in ("qft", "all"):
        checks += _suite_qft(design_file)
    if suite in ("detection", "all"):
        checks += _suite_detection()
    failures = 0
    for name, value, tol in checks:
        ok = value <= tol
        failures += not ok
        print(f"[{'pass' if ok else 'FAIL'}] {name:<58s} dev {value:11.4e}  tol {tol:.1e}")
    print(f"{suite}: {len(checks) - failures}/{len(checks)} checks passed")
    return 1 if failures else 0


# ---------------------------------------------------------------------------
# argument parsing


def _add_run_flags(p: argparse.ArgumentParser, evolve: bool) -> None:
    p.add_argument("--noise", choices=sorted(_NOISE_FLAGS), default="depolarizing")
    p.add_argument("--rate", type=float, default=0.005, help="per-edge per-step noise rate")
    p.add_argument("--g2", type=float, default=1.0, help="gauge coupling squared")
    if evolve:
        p.add_argument("--time", type=float, default=3.0, dest="total_time",
                       help="total evolution time")
        p.add_argument("--steps", type=int, default=30, dest="n_steps",
                       help="number of Trotter steps")
        p.add_argument("--cool", choices=("on", "off"), default="off",
                       help="run cooling sweeps after the noise on every step")
    p.add_argument("--tol", type=float, default=1e-5,
                   help="stop cooling once the overlap deficit is below this")
    p.add_argument("--max-sweeps", type=int, default=10)
    p.add_argument("--out", default=None, help="CSV output path (default: stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gaugecool",
        description="Single-plaquette gauge dynamics with syndrome-based cooling.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    evolve = sub.add_parser("evolve", help="noisy Trotter evolution, CSV per step")
    _add_run_flags(evolve, evolve=True)

    converge = sub.add_parser("converge", help="cooling sweeps after one noisy step")
    _add_run_flags(converge, evolve=False)

    kl = sub.add_parser("kl-audit", help="detection / recovery bookkeeping tables")
    kl.add_argument("--out", default=None, help="CSV output path (default: stdout)")

    check = sub.add_parser("check", help="run an invariant suite, exit 0 iff it passes")
    check.add_argument("suite", choices=_SUITES)
    check.add_argument("--seed", type=int, default=0,
                       help="seed of the Monte-Carlo comparison (hamiltonian suite)")
    check.add_argument("--design-file", default=None,
                       help="averaging set to audit instead of the built-in one")
    return parser


def _run_config(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        noise=args.noise,
        rate=args.rate,
        g2=args.g2,
        total_time=getattr(args, "total_time", 3.0),
        n_steps=getattr(args, "n_steps", 30),
        cool=getattr(args, "cool", "off") == "on",
        tol=args.tol,
        max_sweeps=args.max_sweeps,
        out=args.out,
    )


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "evolve":
            return cmd_evolve(_run_config(args))
        if args.command == "converge":
            return cmd_converge(_run_config(args))
        if args.command == "kl-audit":
            return cmd_kl_audit(args.out)
        return cmd_check(args.suite, args.seed, args.design_file)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
