"""End-to-end construction: net, key set, embedding, certificate.

:func:`run_pipeline` writes a bundle directory in which every stage can be
re-checked on its own, and :func:`verify_bundle` re-runs those checks from
the stored files alone. Nothing time- or machine-dependent is written, so
the same configuration always gives the same bytes.
"""

from __future__ import annotations

import configparser
import hashlib
import logging
from dataclasses import asdict, dataclass, field, fields
from fractions import Fraction
from pathlib import Path
from typing import Any, Mapping

from holefree import embed as E
from holefree import geom
from holefree import io as hio
from holefree.bounds import KNOWN_SEQUENCE_T
from holefree.goodset import (GoodCaps, ceil_log2, good_bound, minimal_good_q, to_binary_almost_net,
                              verify_good)
from holefree.holes import HoleCaps, is_hole_free
from holefree.netgen import (MAX_SOBOL_DIM, AlmostNetParams, minimal_t, sequence_to_net, sobol_points,
                             verify_almost_net)

log = logging.getLogger(__name__)

EXIT_PASS, EXIT_VIOLATION, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3

BUNDLE_FILES = ("net.json", "good.json", "points.json", "perturbed.json", "points.csv")


@dataclass(frozen=True)
class PipelineConfig:
    d: int
    n: int
    T: int = 1
    eps: Fraction = Fraction(0)
    base: int | None = None  # None means "auto"
    growth: str = "squaring"
    seed: int = 0
    max_predicate_calls: int = field(default_factory=lambda: HoleCaps.from_env().max_predicate_calls)
    max_subsets: int = field(default_factory=lambda: HoleCaps.from_env().max_subsets)
    good_max_dm: int = 24
    good_max_subsets: int = 10**7
    max_escalations: int = 3
    max_retries: int = 8

    def __post_init__(self) -> None:
        object.__setattr__(self, "eps", Fraction(self.eps))
        if self.d < 2:
            raise ValueError("d: must be at least 2")
        if self.d - 1 > MAX_SOBOL_DIM:
            raise ValueError(f"d: the built-in generator supports d <= {MAX_SOBOL_DIM + 1}, got {self.d}")
        if self.n < 1:
            raise ValueError("n: must be positive")
        if self.T < 1 or self.T & (self.T - 1):
            raise ValueError(f"T: the built-in generator needs a power of two, got {self.T}")
        if not 0 <= self.eps < 1:
            raise ValueError(f"eps: must lie in [0, 1), got {self.eps}")
        if self.base is not None and self.base < 2:
            raise ValueError("base: must be at least 2 or auto")
        if self.growth not in E.GROWTHS:
            raise ValueError(f"growth: must be one of {', '.join(E.GROWTHS)}")
        for name in ("max_predicate_calls", "max_subsets", "good_max_dm", "good_max_subsets",
                     "max_retries"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name}: caps must be positive")
        if self.max_escalations < 0:
            raise ValueError("max_escalations: must be nonnegative")

    @classmethod
    def from_mapping(cls, values: Mapping[str, Any]) -> "PipelineConfig":
        """Build from strings (config file or flags); unknown keys are errors."""
        known = {f.name for f in fields(cls)}
        kwargs: dict[str, Any] = {}
        for key, raw in values.items():
            if raw is None:
                continue
            if key not in known:
                raise ValueError(f"{key}: unknown setting")
            text = str(raw).strip()
            try:
                if key == "eps":
                    kwargs[key] = hio.parse_fraction(text, "eps")
                elif key == "growth":
                    kwargs[key] = text
                elif key == "base":
                    kwargs[key] = None if text == "auto" else int(text)
                else:
                    kwargs[key] = int(text)
            except ValueError as exc:
                raise ValueError(f"{key}: cannot parse {text!r} ({exc})") from None
        for req in ("d", "n"):
            if req not in kwargs:
                raise ValueError(f"{req}: required")
        return cls(**kwargs)

    def to_json(self) -> dict:
        out = asdict(self)
        out["eps"] = hio.fraction_str(self.eps)
        out["base"] = "auto" if self.base is None else str(self.base)
        return out

    @property
    def hole_caps(self) -> HoleCaps:
        return HoleCaps(self.max_predicate_calls, self.max_subsets)

    @property
    def good_caps(self) -> GoodCaps:
        return GoodCaps(self.good_max_dm, self.good_max_subsets)


def read_config(path: str | Path) -> dict[str, str]:
    """``key = value`` lines; ``#`` starts a comment."""
    parser = configparser.ConfigParser(inline_comment_prefixes=("#",))
    text = Path(path).read_text(encoding="utf-8")
    parser.read_string("[pipeline]\n" + text, source=str(path))
    return dict(parser["pipeline"])


class StageFailure(Exception):
    def __init__(self, code: int, stage: dict):
        super().__init__(f"stage {stage['stage']} ended with {stage['status']}")
        self.code = code
        self.stage = stage


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _guarantee(ell: int, vacuous: bool) -> str:
    text = (f"{ell}-hole-free: every {ell} points of the set have another point of the set "
            f"strictly inside their convex hull, so there are no holes of size greater than {ell - 1}")
    if vacuous:
        text += " (vacuous: the set has fewer than {} points)".format(ell)
    return text


def run_pipeline(cfg: PipelineConfig, out_dir: str | Path) -> tuple[int, dict]:
    """Run every stage, write the bundle to ``out_dir`` and return ``(exit code, report)``."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for name in BUNDLE_FILES + ("report.json",):
        (out / name).unlink(missing_ok=True)
    report: dict[str, Any] = {"config": cfg.to_json(), "stages": []}
    try:
        _run_stages(cfg, out, report)
        code = EXIT_PASS
    except StageFailure as exc:
        report["status"] = exc.stage["status"]
        report["failed_stage"] = exc.stage["stage"]
        code = exc.code
    report["files"] = {name: _sha256(out / name) for name in BUNDLE_FILES if (out / name).exists()}
    hio.write_json(out / "report.json", report)
    return code, report


def _stage(report: dict, name: str, status: str, **info: Any) -> dict:
    entry = {"stage": name, "status": status, **info}
    report["stages"].append(entry)
    log.info("%s: %s", name, status)
    if status == "violation":
        raise StageFailure(EXIT_VIOLATION, entry)
    if status == "cap_exceeded":
        raise StageFailure(EXIT_CAP, entry)
    return entry


def _run_stages(cfg: PipelineConfig, out: Path, report: dict) -> None:
    d, n, T = cfg.d, cfg.n, cfg.T
    t_net = T.bit_length() - 1
    m_net = n + t_net
    digits = n + ceil_log2(T) + 1
    t_seq = KNOWN_SEQUENCE_T.get(d - 1, 0)
    seq = sobol_points(d - 1, m_net, digits)
    X = sequence_to_net(seq, t_seq, m_net, digits)
    hio.write_json(out / "net.json", hio.net_to_json(X, m_net))
    params = AlmostNetParams(T, cfg.eps, n)
    chk = verify_almost_net(X, params)
    _stage(report, "net", "pass" if chk.ok else "violation", points=len(X), m=m_net,
           minimal_t=minimal_t(X, m_net, d),
           box=None if chk.ok else {"ks": list(chk.box.ks), "bs": list(chk.box.bs), "count": chk.count})

    Y = to_binary_almost_net(X, params, d)
    hio.write_json(out / "good.json", hio.good_to_json(Y))
    bad = Y.invariant_violations(limit=5)
    _stage(report, "binary_almost_net", "violation" if bad else "pass", m=Y.m, problems=bad)

    q = good_bound(T, cfg.eps, d)
    g = verify_good(Y, q, cfg.good_caps)
    qmin = minimal_good_q(Y, cfg.good_caps, q) if g.ok else None
    _stage(report, "good", g.status, q=q, minimal_q=qmin, tuples_checked=g.tuples_checked,
           reason=g.reason, prefixes=list(g.prefixes) if g.prefixes else None,
           Z=[list(z) for z in g.Z] if g.Z else None)

    sched = E.build_schedule(d, Y.m, cfg.base, cfg.growth)
    cert = E.certify_embedding(Y, q, sched, cfg.hole_caps, cfg.max_escalations)
    pts = E.embed(Y, cert.schedule)
    hio.write_json(out / "points.json",
                   hio.points_to_json([p.coords for p in pts], cert.schedule, Y.keys))
    (out / "points.csv").write_text(hio.points_csv([p.coords for p in pts]), encoding="utf-8")
    status = {"certified": "pass", "escalate": "violation"}.get(cert.status, cert.status)
    _stage(report, "embed", status, ell=cert.ell, base=str(cert.schedule.base),
           growth=cert.schedule.growth,
           attempts=[{"B": str(b), "oracle": s} for b, s in cert.attempts],
           vacuous=bool(cert.oracle and cert.oracle.vacuous),
           predicate_calls=cert.oracle.predicate_calls if cert.oracle else 0,
           next_base=str(cert.next_base) if cert.status == "escalate" else None)

    try:
        perturbed, prep = E.perturb_to_general_position(pts, cfg.seed, cfg.max_retries, cert.ell,
                                                        cfg.hole_caps)
    except RuntimeError as exc:
        _stage(report, "perturb", "violation", reason=str(exc))
    extra = {"perturbation": {"seed": cfg.seed, "attempts": prep.attempts,
                              "bound": hio.fraction_str(prep.bound),
                              "max_offset": hio.fraction_str(prep.max_offset)}}
    hio.write_json(out / "perturbed.json",
                   hio.points_to_json(perturbed, None, Y.keys, extra))
    _stage(report, "perturb", prep.hole_free_after or "pass", attempts=prep.attempts,
           general_position=True, bound=hio.fraction_str(prep.bound),
           max_offset=hio.fraction_str(prep.max_offset))

    vacuous = len(perturbed) < cert.ell
    report["status"] = "pass"
    report["summary"] = {"d": d, "points": len(perturbed), "q": q, "minimal_q": qmin,
                         "ell": cert.ell, "guarantee": _guarantee(cert.ell, vacuous),
                         "vacuous": vacuous}


# ---------------------------------------------------------------- verification

def verify_bundle(bundle: str | Path, caps: HoleCaps | None = None) -> tuple[int, list[dict]]:
    """Re-run every check on the stored files without regenerating anything."""
    root = Path(bundle)
    checks: list[dict] = []
    worst = EXIT_PASS

    def record(name: str, status: str, detail: str = "") -> None:
        nonlocal worst
        checks.append({"check": name, "status": status, "detail": detail})
        code = {"pass": EXIT_PASS, "violation": EXIT_VIOLATION, "cap_exceeded": EXIT_CAP}[status]
        worst = max(worst, code) if code != EXIT_PASS else worst

    report = hio.read_json(root / "report.json")
    try:
        cfg = PipelineConfig.from_mapping(report["config"])
    except (KeyError, TypeError, ValueError) as exc:
        raise hio.FormatError("report.json:config", str(exc)) from None
    caps = caps or cfg.hole_caps

    for name, digest in report.get("files", {}).items():
        ok = (root / name).exists() and _sha256(root / name) == digest
        record(f"sha256 {name}", "pass" if ok else "violation")

    X, s, m = hio.net_from_json(hio.read_json(root / "net.json"))
    params = AlmostNetParams(cfg.T, cfg.eps, cfg.n)
    chk = verify_almost_net(X, params)
    record("almost net", "pass" if chk.ok else "violation",
           "" if chk.ok else f"box {chk.box} holds {chk.count}")

    Y = hio.good_from_json(hio.read_json(root / "good.json"))
    bad = Y.invariant_violations(limit=3)
    record("binary almost net invariants", "violation" if bad else "pass", "; ".join(bad))
    rebuilt = to_binary_almost_net(X, params, cfg.d)
    record("key set matches net", "pass" if rebuilt.keys == Y.keys else "violation")
    q = good_bound(cfg.T, cfg.eps, cfg.d)
    g = verify_good(Y, q, cfg.good_caps)
    record(f"{q}-good", g.status, g.reason)

    pts, sched, keys = hio.points_from_json(hio.read_json(root / "points.json"))
    if sched is None:
        raise hio.FormatError("points.json:schedule", "missing")
    expect = [p.coords for p in E.embed(Y, sched)]
    record("embedding matches keys", "pass" if expect == pts else "violation")
    ell = (1 << (cfg.d - 1)) * q + 1
    res = is_hole_free(pts, ell, caps)
    record(f"embedded set is {ell}-hole-free", res.status, res.detail)

    csv_text = (root / "points.csv").read_text(encoding="utf-8")
    record("csv matches points", "pass" if csv_text == hio.points_csv(pts) else "violation")

    praw = hio.read_json(root / "perturbed.json")
    per, _, _ = hio.points_from_json(praw)
    bound = hio.parse_fraction(praw.get("perturbation", {}).get("bound", "0"), "perturbation.bound")
    small = len(per) == len(pts) and all(
        abs(Fraction(a) - Fraction(b)) < bound for p, r in zip(pts, per) for a, b in zip(p, r))
    record("offsets below bound", "pass" if small else "violation")
    gp = geom.general_position(per, cfg.d)
    record("general position", "pass" if gp else "violation", "" if gp else str(gp.witness))
    res = is_hole_free(per, ell, caps)
    record(f"perturbed set is {ell}-hole-free", res.status, res.detail)
    return worst, checks
