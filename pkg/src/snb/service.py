"""HTTP facade: stateless distribution lookups plus live trial sessions.

A trial session is nothing but its creation parameters and an ordered
outcome log; every report is recomputed from that log on demand (a pure
fold), which is what makes the append-only persistence below sufficient
and the replay test meaningful.

Wire format: JSON throughout.  Errors are `{"code": ..., "message": ...}`
with 400 for bad input, 404 for unknown sessions, 409 for operations that
conflict with the session state.
"""

from __future__ import annotations

import json
import math
import secrets
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse

from . import bayes, tables
from .dist import Endpoint, SnbParams, conditional_remaining, pmf, success_probability
from .errors import DomainError

# Upper bound on endpoint counts accepted over the wire; reports iterate
# over the support, so unbounded designs would turn one request into an
# arbitrarily large computation.
MAX_ENDPOINT = 5000

POSTERIOR_POINTS = 512

STATUS_ONGOING = "Ongoing"
STATUS_SUCCESS = "StoppedSuccess"
STATUS_FUTILITY = "StoppedFutility"


class ServiceError(Exception):
    """An error with a wire status and payload."""

    def __init__(self, status: int, code: str, message: str) -> None:
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message


def _invalid(message: str) -> ServiceError:
    return ServiceError(400, "invalid", message)


def _not_found(trial_id: str) -> ServiceError:
    return ServiceError(404, "not_found", f"no trial with id {trial_id!r}")


def _conflict(message: str) -> ServiceError:
    return ServiceError(409, "conflict", message)


@dataclass
class TrialSession:
    """One live trial: immutable design plus the mutable outcome log."""

    id: str
    created_at: float
    s: int
    t: int
    p: Optional[float]
    prior: Optional[bayes.BetaPrior]
    outcomes: list[int] = field(default_factory=list)
    lock: threading.Lock = field(default_factory=threading.Lock)

    @property
    def s_obs(self) -> int:
        return sum(self.outcomes)

    @property
    def t_obs(self) -> int:
        return len(self.outcomes) - self.s_obs

    @property
    def status(self) -> str:
        if self.s_obs >= self.s:
            return STATUS_SUCCESS
        if self.t_obs >= self.t:
            return STATUS_FUTILITY
        return STATUS_ONGOING


def _require_int(payload: dict, key: str) -> int:
    value = payload.get(key)
    if isinstance(value, bool) or not isinstance(value, int):
        raise _invalid(f"{key!r} must be an integer, got {value!r}")
    return value


def _require_number(value: Any, name: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise _invalid(f"{name!r} must be a number, got {value!r}")
    if math.isnan(value) or math.isinf(value):
        raise _invalid(f"{name!r} must be finite, got {value!r}")
    return float(value)


def _posterior_components(session: TrialSession) -> list[dict[str, Any]]:
    """The current beta mixture of a prior session, as wire dictionaries.

    One conjugate-update component while ongoing, one endpoint-conditional
    component after stopping.
    """
    prior = session.prior
    assert prior is not None
    status = session.status
    if status == STATUS_ONGOING:
        return [
            {
                "endpoint": None,
                "weight": 1.0,
                "alpha": prior.alpha + session.s_obs,
                "beta": prior.beta + session.t_obs,
            }
        ]
    endpoint = Endpoint.SUCCESS if status == STATUS_SUCCESS else Endpoint.FAILURE
    a, b = bayes.posterior_given_endpoint(
        prior, session.s, session.t, len(session.outcomes), endpoint
    )
    return [{"endpoint": endpoint.value, "weight": 1.0, "alpha": a, "beta": b}]


def _build_report(session: TrialSession, with_preview: bool = True) -> dict[str, Any]:
    """Interim report derived purely from the session design and outcomes."""
    s_obs = session.s_obs
    t_obs = session.t_obs
    status = session.status
    report: dict[str, Any] = {
        "s_obs": s_obs,
        "t_obs": t_obs,
        "enrolled": len(session.outcomes),
        "status": status,
        "p": session.p,
        "remaining_support": None,
        "remaining_pmf": None,
        "posterior": None,
        "predicted_success_probability": None,
        "preview": None,
    }
    if session.prior is not None:
        report["posterior"] = {"components": _posterior_components(session)}
    if status == STATUS_SUCCESS:
        report["predicted_success_probability"] = 1.0
    elif status == STATUS_FUTILITY:
        report["predicted_success_probability"] = 0.0
    else:
        s_rem = session.s - s_obs
        t_rem = session.t - t_obs
        report["remaining_support"] = [min(s_rem, t_rem), s_rem + t_rem - 1]
        if session.p is not None:
            remaining = conditional_remaining(SnbParams(session.p, session.s, session.t), s_obs, t_obs)
            law = [[k, pmf(remaining, k)] for k in range(min(s_rem, t_rem), s_rem + t_rem)]
            predicted = success_probability(remaining)
        else:
            updated = bayes.BetaPrior(session.prior.alpha + s_obs, session.prior.beta + t_obs)
            law = [
                [k, bayes.predictive_pmf(updated, s_rem, t_rem, k)]
                for k in range(min(s_rem, t_rem), s_rem + t_rem)
            ]
            predicted = bayes.predicted_success_probability(
                session.prior, session.s, session.t, s_obs, t_obs
            )
        report["remaining_pmf"] = law
        report["predicted_success_probability"] = predicted
        if with_preview:
            report["preview"] = {
                "response": _preview_report(session, 1),
                "nonresponse": _preview_report(session, 0),
            }
    return report


def _preview_report(session: TrialSession, outcome: int) -> dict[str, Any]:
    """Report the session would produce if `outcome` were recorded now.

    Identical to the committed report by construction: it runs the same
    fold on the extended log, so the UI can show what-ifs without doing
    any probability arithmetic.
    """
    hypothetical = TrialSession(
        id=session.id,
        created_at=session.created_at,
        s=session.s,
        t=session.t,
        p=session.p,
        prior=session.prior,
        outcomes=session.outcomes + [outcome],
    )
    return _build_report(hypothetical, with_preview=False)


class TrialStore:
    """Session registry with optional append-only persistence.

    Each session owns one plain-text log: a JSON header line followed by
    one line per event ("1", "0", or "undo").  Replaying a log through the
    same fold that serves live requests reproduces the session exactly.
    """

    def __init__(self, data_dir: Optional[str | Path] = None) -> None:
        self._sessions: dict[str, TrialSession] = {}
        self._lock = threading.Lock()
        self._data_dir: Optional[Path] = None
        if data_dir is not None:
            self._data_dir = Path(data_dir)
            self._data_dir.mkdir(parents=True, exist_ok=True)
            self._replay_all()

    def _log_path(self, trial_id: str) -> Optional[Path]:
        if self._data_dir is None:
            return None
        return self._data_dir / f"{trial_id}.log"

    def _append_event(self, session: TrialSession, event: str) -> None:
        path = self._log_path(session.id)
        if path is None:
            return
        with open(path, "a", encoding="ascii") as handle:
            handle.write(event + "\n")
            handle.flush()

    def _replay_all(self) -> None:
        assert self._data_dir is not None
        for path in sorted(self._data_dir.glob("*.log")):
            session = self._replay_one(path)
            self._sessions[session.id] = session

    def _replay_one(self, path: Path) -> TrialSession:
        lines = path.read_text(encoding="ascii").splitlines()
        if not lines:
            raise ValueError(f"corrupt session log {path}: empty file")
        header = json.loads(lines[0])
        prior = None
        if header.get("prior") is not None:
            prior = bayes.BetaPrior(header["prior"]["alpha"], header["prior"]["beta"])
        session = TrialSession(
            id=header["id"],
            created_at=header["created_at"],
            s=header["s"],
            t=header["t"],
            p=header.get("p"),
            prior=prior,
        )
        for line_no, line in enumerate(lines[1:], start=2):
            event = line.strip()
            if event in ("0", "1"):
                if session.status != STATUS_ONGOING:
                    raise ValueError(f"corrupt session log {path}:{line_no}: outcome after stop")
                session.outcomes.append(int(event))
            elif event == "undo":
                if not session.outcomes:
                    raise ValueError(f"corrupt session log {path}:{line_no}: undo on empty log")
                session.outcomes.pop()
            else:
                raise ValueError(f"corrupt session log {path}:{line_no}: {event!r}")
        return session

    def create(self, payload: dict) -> TrialSession:
        if not isinstance(payload, dict):
            raise _invalid("request body must be a JSON object")
        s = _require_int(payload, "s")
        t = _require_int(payload, "t")
        if not 1 <= s <= MAX_ENDPOINT or not 1 <= t <= MAX_ENDPOINT:
            raise _invalid(f"s and t must lie in [1, {MAX_ENDPOINT}], got s={s}, t={t}")
        has_p = payload.get("p") is not None
        has_prior = payload.get("prior") is not None
        if has_p == has_prior:
            raise _invalid("provide exactly one of 'p' or 'prior'")
        p = None
        prior = None
        if has_p:
            p = _require_number(payload["p"], "p")
            if not 0.0 <= p <= 1.0:
                raise _invalid(f"'p' must lie in [0, 1], got {p}")
        else:
            shape = payload["prior"]
            if not isinstance(shape, dict):
                raise _invalid("'prior' must be an object with 'alpha' and 'beta'")
            alpha = _require_number(shape.get("alpha"), "prior.alpha")
            beta = _require_number(shape.get("beta"), "prior.beta")
            if alpha <= 0.0 or beta <= 0.0:
                raise _invalid(f"prior shapes must be positive, got alpha={alpha}, beta={beta}")
            prior = bayes.BetaPrior(alpha, beta)
        session = TrialSession(
            id=secrets.token_urlsafe(16),
            created_at=time.time(),
            s=s,
            t=t,
            p=p,
            prior=prior,
        )
        with self._lock:
            self._sessions[session.id] = session
        path = self._log_path(session.id)
        if path is not None:
            header = {
                "id": session.id,
                "created_at": session.created_at,
                "s": session.s,
                "t": session.t,
                "p": session.p,
                "prior": None if prior is None else {"alpha": prior.alpha, "beta": prior.beta},
            }
            with open(path, "w", encoding="ascii") as handle:
                handle.write(json.dumps(header) + "\n")
                handle.flush()
        return session

    def get(self, trial_id: str) -> TrialSession:
        with self._lock:
            session = self._sessions.get(trial_id)
        if session is None:
            raise _not_found(trial_id)
        return session

    def record(self, trial_id: str, outcome: int) -> TrialSession:
        session = self.get(trial_id)
        with session.lock:
            status = session.status
            if status != STATUS_ONGOING:
                raise _conflict(f"trial already stopped: {status}")
            session.outcomes.append(outcome)
            self._append_event(session, str(outcome))
        return session

    def undo(self, trial_id: str) -> TrialSession:
        session = self.get(trial_id)
        with session.lock:
            if not session.outcomes:
                raise _conflict("nothing to undo: the outcome log is empty")
            session.outcomes.pop()
            self._append_event(session, "undo")
        return session


def _session_payload(session: TrialSession) -> dict[str, Any]:
    with session.lock:
        snapshot = TrialSession(
            id=session.id,
            created_at=session.created_at,
            s=session.s,
            t=session.t,
            p=session.p,
            prior=session.prior,
            outcomes=list(session.outcomes),
        )
    return {
        "id": snapshot.id,
        "created_at": snapshot.created_at,
        "s": snapshot.s,
        "t": snapshot.t,
        "p": snapshot.p,
        "prior": None
        if snapshot.prior is None
        else {"alpha": snapshot.prior.alpha, "beta": snapshot.prior.beta},
        "outcomes": list(snapshot.outcomes),
        "report": _build_report(snapshot),
    }


def create_app(data_dir: Optional[str | Path] = None) -> FastAPI:
    """Build the ASGI application, optionally persisting to data_dir."""
    app = FastAPI(title="snb trial service", docs_url=None, redoc_url=None)
    store = TrialStore(data_dir)
    app.state.store = store

    @app.exception_handler(ServiceError)
    async def _service_error(_request: Request, exc: ServiceError) -> JSONResponse:
        return JSONResponse(status_code=exc.status, content={"code": exc.code, "message": exc.message})

    @app.exception_handler(DomainError)
    async def _domain_error(_request: Request, exc: DomainError) -> JSONResponse:
        return JSONResponse(status_code=400, content={"code": "invalid", "message": str(exc)})

    @app.exception_handler(RequestValidationError)
    async def _validation_error(_request: Request, exc: RequestValidationError) -> JSONResponse:
        return JSONResponse(status_code=400, content={"code": "invalid", "message": str(exc)})

    @app.post("/api/trials")
    def create_trial(payload: dict) -> dict[str, Any]:
        session = store.create(payload)
        return _session_payload(session)

    @app.get("/api/trials/{trial_id}")
    def get_trial(trial_id: str) -> dict[str, Any]:
        return _session_payload(store.get(trial_id))

    @app.post("/api/trials/{trial_id}/outcomes")
    def record_outcome(trial_id: str, payload: dict) -> dict[str, Any]:
        if not isinstance(payload, dict) or "response" not in payload:
            raise _invalid("request body must be an object with a 'response' field")
        response = payload["response"]
        if not isinstance(response, bool):
            raise _invalid(f"'response' must be true or false, got {response!r}")
        session = store.record(trial_id, 1 if response else 0)
        return _session_payload(session)

    @app.post("/api/trials/{trial_id}/undo")
    def undo_outcome(trial_id: str) -> dict[str, Any]:
        return _session_payload(store.undo(trial_id))

    @app.get("/api/trials/{trial_id}/posterior")
    def get_posterior(trial_id: str) -> dict[str, Any]:
        session = store.get(trial_id)
        with session.lock:
            if session.prior is None:
                raise _conflict("fixed-p session has no posterior; create with a prior instead")
            components = _posterior_components(session)
        density = []
        for i in range(POSTERIOR_POINTS):
            x = (i + 0.5) / POSTERIOR_POINTS
            value = sum(
                comp["weight"] * bayes.BetaPrior(comp["alpha"], comp["beta"]).density(x)
                for comp in components
            )
            density.append([x, value])
        return {"components": components, "density": density}

    @app.get("/api/snb/pmf")
    def snb_pmf(p: str, s: str, t: str) -> dict[str, Any]:
        params = SnbParams(_parse_float(p, "p"), _parse_int(s, "s"), _parse_int(t, "t"))
        if params.s > MAX_ENDPOINT or params.t > MAX_ENDPOINT:
            raise _invalid(f"s and t must lie in [1, {MAX_ENDPOINT}], got s={params.s}, t={params.t}")
        table = tables.pmf_table(params)
        return {"columns": table.columns, "meta": table.meta, "rows": table.rows}

    @app.get("/api/snb/moments")
    def snb_moments(s: str, t: str, grid: str) -> dict[str, Any]:
        s_val = _parse_int(s, "s")
        t_val = _parse_int(t, "t")
        if not 1 <= s_val <= MAX_ENDPOINT or not 1 <= t_val <= MAX_ENDPOINT:
            raise _invalid(f"s and t must lie in [1, {MAX_ENDPOINT}], got s={s_val}, t={t_val}")
        table = tables.moments_table(s_val, t_val, tables.parse_grid(grid))
        return {"columns": table.columns, "meta": table.meta, "rows": table.rows}

    return app


def _parse_float(text: str, name: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise _invalid(f"{name!r} must be a number, got {text!r}") from None


def _parse_int(text: str, name: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise _invalid(f"{name!r} must be an integer, got {text!r}") from None
