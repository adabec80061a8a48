"""End-to-end runs: simulate -> decompose -> image -> verify, writing artifacts."""

from __future__ import annotations

import contextlib
import json
import logging
import math
from pathlib import Path

from . import bessel
from .config import RunConfig
from .forward import add_noise, assemble_msr
from .imaging import analytic_multi, analytic_single, image_multi, image_single
from .spectral import svd
from .verify import (
    antiderivative_residuals,
    check_lemma_decay,
    check_theorem_multi,
    check_theorem_single,
    quality_metrics,
)

log = logging.getLogger(__name__)

LEMMA_KR = (10.0, 40.0, 160.0, 640.0)
ANTIDERIVATIVE_PAIRS = ((0.1, 1.0), (1.0, 2.0), (2.5, 37.0), (10.0, 100.0), (0.1, 200.0))
# tolerances; theorem_single depends on the aperture
TOL_LEMMA_FULL = 1e-8
TOL_LEMMA_EXPONENT = (-0.65, -0.35)
TOL_SINGLE_FULL = 0.05
TOL_SINGLE_LIMITED = 0.15
TOL_MULTI = 0.1
TOL_ANTIDERIVATIVE = 1e-7


class StageError(RuntimeError):
    def __init__(self, stage: str, cause: Exception):
        self.stage = stage
        super().__init__(f"stage '{stage}' failed: {cause}")


@contextlib.contextmanager
def stage(name: str):
    try:
        yield
    except StageError:
        raise
    except Exception as exc:  # noqa: BLE001 - re-raised with the stage name
        raise StageError(name, exc) from exc


def _outdir(cfg: RunConfig) -> Path:
    path = Path(cfg.output.directory)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _finite(obj):
    # strict JSON has no inf/nan
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    if isinstance(obj, dict):
        return {k: _finite(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_finite(v) for v in obj]
    return obj


def _write_json(path: Path, obj) -> None:
    path.write_text(json.dumps(_finite(obj), indent=2, sort_keys=True, allow_nan=False) + "\n")


def decompose(cfg: RunConfig):
    """Singular systems for every configured wavenumber (noise applied)."""
    d = cfg.array.directions()
    systems = []
    for f, k in enumerate(cfg.frequencies.wavenumbers()):
        msr = assemble_msr(cfg.scene, d, k)
        # distinct seed per frequency, still fixed by the config
        msr = add_noise(msr, cfg.noise.level, cfg.noise.seed + f)
        systems.append((msr, svd(msr, tau=cfg.effective_tau)))
    return d, systems


def simulate(cfg: RunConfig):
    with stage("simulate"):
        d, systems = decompose(cfg)
        out = _outdir(cfg)
        for f, (msr, sys) in enumerate(systems, 1):
            if "csv" in cfg.output.formats:
                msr.to_csv(out / f"msr_f{f:02d}.csv")
            if cfg.output.emit_singular_values:
                sys.to_csv(out / f"singular_values_f{f:02d}.csv")
        log.info("simulated %d frequencies", len(systems))
    return d, systems


def image(cfg: RunConfig, decomposed=None) -> dict:
    """Write single/multi-frequency and analytic maps plus quality metrics."""
    with stage("image"):
        d, systems = decomposed if decomposed is not None else decompose(cfg)
        grid = cfg.grid
        ks = [sys.wavenumber for _, sys in systems]
        maps = {
            "single": image_single(systems[-1][1], d, grid),
            "analytic_single": analytic_single(cfg.scene, grid, ks[-1]),
        }
        if len(systems) >= 2:
            maps["multi"] = image_multi([s for _, s in systems], d, grid)
            maps["analytic_multi"] = analytic_multi(cfg.scene, grid, ks[0], ks[-1])
        out = _outdir(cfg)
        for name, m in maps.items():
            if "csv" in cfg.output.formats:
                m.to_csv(out / f"map_{name}.csv")
            if "pgm" in cfg.output.formats:
                m.to_pgm(out / f"map_{name}.pgm")
        lam = cfg.frequencies.lambda_min
        metrics = {name: quality_metrics(m, cfg.scene, lam).to_dict() for name, m in maps.items()}
        metrics["signal_dimension"] = [sys.truncation_index for _, sys in systems]
        _write_json(out / "metrics.json", metrics)
    return metrics


def verify(cfg: RunConfig, truncate_bessel: int | None = None) -> dict:
    """Run every analytic check on the first crack of the scene.

    Returns the report; ``report["passed"]`` is False when any check misses
    its tolerance.
    """
    ctx = bessel.truncated(truncate_bessel) if truncate_bessel else contextlib.nullcontext()
    with stage("verify"), ctx:
        d = cfg.array.directions()
        scene = cfg.scene.subset([0])
        ks = cfg.frequencies.wavenumbers()
        checks = {}

        lemma = check_lemma_decay(d.alpha, d.beta, LEMMA_KR)
        if d.full_view:
            ok = max(lemma.error) < TOL_LEMMA_FULL
            tol = {"max_error": TOL_LEMMA_FULL}
        else:
            ok = lemma.passes(*TOL_LEMMA_EXPONENT)
            tol = {"fitted_exponent": list(TOL_LEMMA_EXPONENT)}
        checks["lemma_decay"] = {**lemma.to_dict(), "tolerance": tol, "passed": ok}

        rms = check_theorem_single(scene, d, ks[-1], cfg.grid)
        tol1 = TOL_SINGLE_FULL if d.full_view else TOL_SINGLE_LIMITED
        checks["theorem_single"] = {"rms": rms, "tolerance": tol1, "passed": rms < tol1}

        if len(ks) >= 2:
            mf = check_theorem_multi(scene, d, ks, cfg.grid)
            checks["theorem_multi"] = {"rms": mf.rms, "neglected_ratio": mf.neglected_ratio,
                                       "probe_radius": mf.probe_radius,
                                       "tolerance": TOL_MULTI, "passed": mf.rms < TOL_MULTI}

        res = antiderivative_residuals(ANTIDERIVATIVE_PAIRS)
        checks["antiderivative_identity"] = {
            "pairs": [list(p) for p in ANTIDERIVATIVE_PAIRS], "residuals": res,
            "tolerance": TOL_ANTIDERIVATIVE,
            "passed": all(math.isfinite(r) and r < TOL_ANTIDERIVATIVE for r in res)}

        report = {"checks": checks, "passed": all(c["passed"] for c in checks.values())}
        _write_json(_outdir(cfg) / "verify_report.json", report)
    return report
