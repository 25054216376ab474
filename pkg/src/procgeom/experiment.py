"""Noise-robustness experiment: scaled copies of one base process.

Scaling a process by a small factor drags every emission row toward the
uniform distribution — the streams it emits look like flat white noise by
first-order statistics — yet the angles between the scaled processes are
unchanged wherever both operands keep nonzero norm.  The experiment builds
the scaled family, computes the exact model-level angle matrix, generates
two independent streams per model, and compares against the empirical
stream-level angles, with the angle between a model's own two streams
serving as the "angle from self" diagnostic (ideally zero).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ZeroNorm
from .pfsa import Pfsa
from .process import ProcessHandle, angle, as_process, scale_process
from .streams import estimate_derivatives, stream_from_model, stream_stats, table_angle

DEFAULT_SCALES = (1.0, -1.0, 0.1, -0.1, 0.0)


@dataclass(frozen=True)
class ExperimentConfig:
    scales: tuple[float, ...] = DEFAULT_SCALES
    stream_length: int = 1_000_000
    depth: int = 4
    smoothing: float = 0.5
    seed: int = 42

    def echo(self) -> str:
        scales = ",".join(f"{a:g}" for a in self.scales)
        return (
            f"scales={scales} stream_length={self.stream_length} "
            f"depth={self.depth} smoothing={self.smoothing:g} seed={self.seed}"
        )


@dataclass(frozen=True)
class ExperimentReport:
    """Results of one noise experiment.

    ``model_angles`` holds exact pairwise process angles (NaN where an
    operand has zero norm); ``empirical_angles`` holds stream-level angles
    with the self-angle diagnostics on the diagonal.  Both are symmetric.
    """

    config: ExperimentConfig
    labels: tuple[str, ...]
    zero_norm: tuple[bool, ...]
    model_angles: np.ndarray
    empirical_angles: np.ndarray
    stream_means: np.ndarray   # (n_models, 2)
    stream_stds: np.ndarray    # (n_models, 2)
    models: tuple[ProcessHandle, ...] = field(repr=False)

    def _matrix_csv(self, matrix: np.ndarray, what: str) -> str:
        lines = [f"# {what}; angles in radians; {self.config.echo()}"]
        lines.append("model," + ",".join(self.labels))
        for i, lab in enumerate(self.labels):
            cells = ",".join("" if np.isnan(v) else f"{v:.17g}" for v in matrix[i])
            lines.append(f"{lab},{cells}")
        return "\n".join(lines) + "\n"

    def model_angles_csv(self) -> str:
        return self._matrix_csv(self.model_angles, "exact model-level angle matrix")

    def empirical_angles_csv(self) -> str:
        return self._matrix_csv(
            self.empirical_angles,
            "empirical stream-level angle matrix (diagonal: self-angle from two independent streams)",
        )

    def stats_csv(self) -> str:
        lines = [f"# per-stream symbol-index statistics; {self.config.echo()}"]
        lines.append("model,stream,mean,std")
        for i, lab in enumerate(self.labels):
            for s in range(2):
                lines.append(f"{lab},{s},{self.stream_means[i, s]:.17g},{self.stream_stds[i, s]:.17g}")
        return "\n".join(lines) + "\n"

    def summary(self) -> str:
        out = [f"noise experiment ({self.config.echo()})", ""]
        out.append(f"{'model':>10} {'mean(s0)':>12} {'std(s0)':>12} {'self-angle':>12} {'zero-norm':>10}")
        for i, lab in enumerate(self.labels):
            self_angle = self.empirical_angles[i, i]
            self_txt = "n/a" if np.isnan(self_angle) else f"{self_angle:.4f}"
            out.append(
                f"{lab:>10} {self.stream_means[i, 0]:>12.6f} {self.stream_stds[i, 0]:>12.6f} "
                f"{self_txt:>12} {str(self.zero_norm[i]):>10}"
            )
        out.append("")
        out.append("pairwise angles (exact | empirical):")
        n = len(self.labels)
        for i in range(n):
            for j in range(i + 1, n):
                ex = self.model_angles[i, j]
                em = self.empirical_angles[i, j]
                ex_txt = "undefined (zero norm)" if np.isnan(ex) else f"{ex:.6f}"
                em_txt = "n/a" if np.isnan(em) else f"{em:.6f}"
                out.append(f"  {self.labels[i]} vs {self.labels[j]}: {ex_txt} | {em_txt}")
        return "\n".join(out) + "\n"


def run_noise_experiment(base: Pfsa | ProcessHandle, config: ExperimentConfig = ExperimentConfig()) -> ExperimentReport:
    """Build the scaled model family, stream from it, and measure angles."""
    base_p = base if isinstance(base, ProcessHandle) else as_process(base, label="G")
    models = tuple(scale_process(a, base_p) for a in config.scales)
    labels = tuple(f"{a:g}G" for a in config.scales)
    n = len(models)

    model_angles = np.full((n, n), np.nan)
    zero_norm = []
    for i, m in enumerate(models):
        zero_norm.append(len(m.machine.states) == 1 and _is_uniform_row(m))
    for i in range(n):
        for j in range(i, n):
            try:
                model_angles[i, j] = model_angles[j, i] = angle(models[i], models[j])
            except ZeroNorm:
                pass

    seeds = np.random.SeedSequence(config.seed).spawn(n)
    streams = [
        [stream_from_model(m.machine, config.stream_length, s) for s in seeds[i].spawn(2)]
        for i, m in enumerate(models)
    ]
    means = np.empty((n, 2))
    stds = np.empty((n, 2))
    tables = []
    for i in range(n):
        per_model = []
        for s in range(2):
            means[i, s], stds[i, s] = stream_stats(streams[i][s])
            per_model.append(estimate_derivatives(streams[i][s], config.depth, config.smoothing))
        tables.append(per_model)

    empirical = np.full((n, n), np.nan)
    for i in range(n):
        try:
            empirical[i, i] = table_angle(tables[i][0], tables[i][1])
        except ZeroNorm:
            pass
        for j in range(i + 1, n):
            try:
                empirical[i, j] = empirical[j, i] = table_angle(tables[i][0], tables[j][0])
            except ZeroNorm:
                pass

    return ExperimentReport(
        config=config,
        labels=labels,
        zero_norm=tuple(zero_norm),
        model_angles=model_angles,
        empirical_angles=empirical,
        stream_means=means,
        stream_stds=stds,
        models=models,
    )


def _is_uniform_row(p: ProcessHandle) -> bool:
    row = p.machine._morph[0]
    return bool(np.allclose(row, 1.0 / len(row), atol=1e-12))
