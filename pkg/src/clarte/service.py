"""HTTP annotation service: serves best-worst tuples or rating tasks to
annotators, persists their responses, and exports results.

Persistence is file-backed JSONL (desk-scale campaigns, inspectable with
standard tools).  Task assignment and appends are serialized through one
lock so response counts can never exceed the designed annotator slots;
reads work on snapshots.  Annotator identity is an opaque client-supplied
string; authentication is a deployment concern, not handled here.
"""

from __future__ import annotations

import hashlib
import json
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse, PlainTextResponse

from .evaluation import BwsDesign, BwsResponse, BwsTuple, RatingResponse


def design_to_payload(design: BwsDesign) -> dict:
    return {
        "params": dict(design.params),
        "tuples": [
            {"tuple_id": t.tuple_id, "members": list(t.members)}
            for t in design.tuples
        ],
    }


def design_from_payload(payload: dict) -> BwsDesign:
    params = dict(payload.get("params", {}))
    tuples = tuple(
        BwsTuple(rec["tuple_id"], tuple(rec["members"]))
        for rec in payload["tuples"]
    )
    texts = sorted({m for t in tuples for m in t.members})
    a = int(params.get("a", 1))
    assignments = tuple(tuple(f"slot-{j}" for j in range(a)) for _ in tuples)
    return BwsDesign(tuple(texts), tuples, assignments, params)


class CampaignError(Exception):
    """Base for request-level failures."""
    status = 400


class UnknownCampaignError(CampaignError):
    status = 404


class SlotConflictError(CampaignError):
    status = 409


@dataclass
class Campaign:
    """One annotation campaign: its task definitions, display texts, and
    the mutable answered/leased state rebuilt from the response log."""

    campaign_id: str
    kind: str  # "bws" | "rating"
    texts: dict[str, str]
    annotators_per_task: int
    design: BwsDesign | None = None          # bws only
    text_order: tuple[str, ...] = ()         # rating only
    answered: set[tuple[str, str]] = field(default_factory=set)
    answered_count: dict[str, int] = field(default_factory=dict)
    leases: dict[str, str] = field(default_factory=dict)  # annotator -> task

    def task_ids(self) -> tuple[str, ...]:
        if self.kind == "bws":
            assert self.design is not None
            return tuple(t.tuple_id for t in self.design.tuples)
        return self.text_order

    def total_slots(self) -> int:
        return len(self.task_ids()) * self.annotators_per_task

    def lease_count(self, task_id: str) -> int:
        return sum(1 for t in self.leases.values() if t == task_id)

    def next_open_task(self, annotator_id: str) -> str | None:
        held = self.leases.get(annotator_id)
        if held is not None and (held, annotator_id) not in self.answered:
            return held
        for task_id in self.task_ids():
            if (task_id, annotator_id) in self.answered:
                continue
            taken = self.answered_count.get(task_id, 0) + self.lease_count(task_id)
            if taken < self.annotators_per_task:
                return task_id
        return None

    def task_payload(self, task_id: str, annotator_id: str) -> dict:
        if self.kind == "bws":
            assert self.design is not None
            members = self.design.members_by_id()[task_id]
            return {
                "task_id": f"{task_id}:{annotator_id}",
                "kind": "bws",
                "tuple_id": task_id,
                "texts": [{"id": m, "body": self.texts[m]} for m in members],
            }
        return {
            "task_id": f"{task_id}:{annotator_id}",
            "kind": "rating",
            "text_id": task_id,
            "text": {"id": task_id, "body": self.texts[task_id]},
        }


def _canonical_hash(payload: dict) -> str:
    blob = json.dumps(payload, sort_keys=True, ensure_ascii=False)
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()[:16]


class CampaignStore:
    """Owns all campaigns under one data directory.

    Every state change happens under ``_lock``; a response is persisted as
    a single flushed JSONL line before the in-memory state acknowledges
    it, so the log never holds half a response.
    """

    def __init__(self, data_dir: str | Path) -> None:
        self.data_dir = Path(data_dir)
        self.data_dir.mkdir(parents=True, exist_ok=True)
        self._lock = threading.RLock()
        self._campaigns: dict[str, Campaign] = {}
        self._load_existing()

    # -- persistence ------------------------------------------------------

    def _campaign_dir(self, campaign_id: str) -> Path:
        return self.data_dir / "campaigns" / campaign_id

    def _load_existing(self) -> None:
        root = self.data_dir / "campaigns"
        if not root.is_dir():
            return
        for cdir in sorted(root.iterdir()):
            definition = cdir / "campaign.json"
            if not definition.is_file():
                continue
            payload = json.loads(definition.read_text("utf-8"))
            campaign = self._campaign_from_definition(payload)
            log = cdir / "responses.jsonl"
            if log.is_file():
                for line in log.read_text("utf-8").splitlines():
                    if not line.strip():
                        continue
                    rec = json.loads(line)
                    task = rec["tuple_id"] if campaign.kind == "bws" else rec["text_id"]
                    who = rec["annotator_id"] if campaign.kind == "bws" else rec["rater_id"]
                    campaign.answered.add((task, who))
                    campaign.answered_count[task] = campaign.answered_count.get(task, 0) + 1
            self._campaigns[campaign.campaign_id] = campaign

    def _campaign_from_definition(self, payload: dict) -> Campaign:
        kind = payload["kind"]
        texts = dict(payload["texts"])
        if kind == "bws":
            design = design_from_payload(payload["design"])
            missing = [t for t in design.texts if t not in texts]
            if missing:
                raise CampaignError(f"design references missing texts: {missing}")
            return Campaign(
                campaign_id=payload["campaign_id"], kind="bws", texts=texts,
                annotators_per_task=int(design.params.get("a", 1)), design=design,
            )
        if kind == "rating":
            order = tuple(payload["text_ids"])
            missing = [t for t in order if t not in texts]
            if missing:
                raise CampaignError(f"task list references missing texts: {missing}")
            return Campaign(
                campaign_id=payload["campaign_id"], kind="rating", texts=texts,
                annotators_per_task=int(payload.get("raters_per_text", 1)),
                text_order=order,
            )
        raise CampaignError(f"unknown campaign kind {kind!r}")

    # -- operations -------------------------------------------------------

    def create_campaign(self, payload: dict) -> str:
        body = {k: payload[k] for k in sorted(payload)}
        campaign_id = "c" + _canonical_hash(body)
        with self._lock:
            if campaign_id in self._campaigns:
                return campaign_id
            definition = dict(body, campaign_id=campaign_id)
            campaign = self._campaign_from_definition(definition)
            cdir = self._campaign_dir(campaign_id)
            cdir.mkdir(parents=True, exist_ok=True)
            (cdir / "campaign.json").write_text(
                json.dumps(definition, sort_keys=True, ensure_ascii=False,
                           indent=2) + "\n", "utf-8")
            self._campaigns[campaign_id] = campaign
            return campaign_id

    def _get(self, campaign_id: str) -> Campaign:
        campaign = self._campaigns.get(campaign_id)
        if campaign is None:
            raise UnknownCampaignError(f"unknown campaign {campaign_id!r}")
        return campaign

    def next_task(self, campaign_id: str, annotator_id: str) -> dict | None:
        if not annotator_id:
            raise CampaignError("annotator id required")
        with self._lock:
            campaign = self._get(campaign_id)
            task_id = campaign.next_open_task(annotator_id)
            if task_id is None:
                return None
            campaign.leases[annotator_id] = task_id
            return campaign.task_payload(task_id, annotator_id)

    def submit_response(self, campaign_id: str, payload: dict) -> dict:
        with self._lock:
            campaign = self._get(campaign_id)
            if campaign.kind == "bws":
                record, task, who = self._validate_bws(campaign, payload)
            else:
                record, task, who = self._validate_rating(campaign, payload)
            if (task, who) in campaign.answered:
                raise SlotConflictError(
                    f"{who!r} already answered {task!r}")
            if campaign.answered_count.get(task, 0) >= campaign.annotators_per_task:
                raise SlotConflictError(f"no open slot left on {task!r}")
            self._append_response(campaign, record)
            campaign.answered.add((task, who))
            campaign.answered_count[task] = campaign.answered_count.get(task, 0) + 1
            if campaign.leases.get(who) == task:
                del campaign.leases[who]
            return {"ok": True, "accepted": record}

    def _validate_bws(self, campaign: Campaign, payload: dict):
        try:
            response = BwsResponse(
                tuple_id=str(payload["tuple_id"]),
                annotator_id=str(payload["annotator_id"]),
                best=str(payload["best"]),
                worst=str(payload["worst"]),
                timestamp=float(payload.get("timestamp") or time.time()),
            )
        except KeyError as exc:
            raise CampaignError(f"missing field {exc}") from None
        except ValueError as exc:
            raise CampaignError(str(exc)) from None
        assert campaign.design is not None
        members = campaign.design.members_by_id().get(response.tuple_id)
        if members is None:
            raise CampaignError(f"unknown tuple {response.tuple_id!r}")
        if response.best not in members or response.worst not in members:
            raise CampaignError("best/worst must belong to the tuple")
        record = {
            "tuple_id": response.tuple_id, "annotator_id": response.annotator_id,
            "best": response.best, "worst": response.worst,
            "timestamp": response.timestamp,
        }
        return record, response.tuple_id, response.annotator_id

    def _validate_rating(self, campaign: Campaign, payload: dict):
        try:
            response = RatingResponse(
                text_id=str(payload["text_id"]),
                rater_id=str(payload["rater_id"]),
                rating=float(payload["rating"]),
                timestamp=float(payload.get("timestamp") or time.time()),
            )
        except KeyError as exc:
            raise CampaignError(f"missing field {exc}") from None
        except ValueError as exc:
            raise CampaignError(str(exc)) from None
        if response.text_id not in campaign.text_order:
            raise CampaignError(f"unknown text {response.text_id!r}")
        record = {
            "text_id": response.text_id, "rater_id": response.rater_id,
            "rating": response.rating, "timestamp": response.timestamp,
        }
        return record, response.text_id, response.rater_id

    def _append_response(self, campaign: Campaign, record: dict) -> None:
        log = self._campaign_dir(campaign.campaign_id) / "responses.jsonl"
        line = json.dumps(record, sort_keys=True, ensure_ascii=False)
        with open(log, "a", encoding="utf-8") as fh:
            fh.write(line + "\n")
            fh.flush()

    def export_responses(self, campaign_id: str) -> str:
        with self._lock:
            campaign = self._get(campaign_id)
            log = self._campaign_dir(campaign_id) / "responses.jsonl"
            if not log.is_file():
                return ""
            records = [json.loads(line) for line in
                       log.read_text("utf-8").splitlines() if line.strip()]
        if campaign.kind == "bws":
            records.sort(key=lambda r: (r["tuple_id"], r["annotator_id"], r["timestamp"]))
        else:
            records.sort(key=lambda r: (r["text_id"], r["rater_id"], r["timestamp"]))
        lines = [json.dumps(r, sort_keys=True, ensure_ascii=False) for r in records]
        return "\n".join(lines) + ("\n" if lines else "")

    def progress(self, campaign_id: str) -> dict:
        with self._lock:
            campaign = self._get(campaign_id)
            total = campaign.total_slots()
            accepted = sum(campaign.answered_count.values())
            complete = sum(
                1 for task in campaign.task_ids()
                if campaign.answered_count.get(task, 0) >= campaign.annotators_per_task
            )
            return {
                "campaign_id": campaign_id,
                "kind": campaign.kind,
                "total_slots": total,
                "accepted": accepted,
                "open": total - accepted,
                "tasks_complete": complete,
                "tasks_total": len(campaign.task_ids()),
            }

    def campaign_meta(self, campaign_id: str) -> dict:
        with self._lock:
            campaign = self._get(campaign_id)
            meta = {"campaign_id": campaign_id, "kind": campaign.kind,
                    "annotators_per_task": campaign.annotators_per_task,
                    "tasks_total": len(campaign.task_ids())}
            if campaign.kind == "bws":
                assert campaign.design is not None
                meta["design"] = design_to_payload(campaign.design)
            else:
                meta["text_ids"] = list(campaign.text_order)
            return meta


def create_app(data_dir: str | Path, static_dir: str | Path | None = None) -> FastAPI:
    """FastAPI application bound to a campaign store on ``data_dir``."""
    store = CampaignStore(data_dir)
    app = FastAPI(title="clarte annotation service")
    app.state.store = store

    @app.exception_handler(CampaignError)
    async def _campaign_error(request: Request, exc: CampaignError):
        return JSONResponse(status_code=exc.status, content={"error": str(exc)})

    @app.post("/api/campaigns")
    async def create_campaign(request: Request):
        payload = await request.json()
        campaign_id = store.create_campaign(payload)
        return {"campaign_id": campaign_id}

    @app.get("/api/campaigns/{campaign_id}")
    def campaign_meta(campaign_id: str):
        return store.campaign_meta(campaign_id)

    @app.get("/api/campaigns/{campaign_id}/next")
    def next_task(campaign_id: str, annotator: str = ""):
        task = store.next_task(campaign_id, annotator)
        if task is None:
            return {"done": True, "task": None}
        return {"done": False, "task": task}

    @app.post("/api/campaigns/{campaign_id}/responses")
    async def submit_response(campaign_id: str, request: Request):
        payload = await request.json()
        return store.submit_response(campaign_id, payload)

    @app.get("/api/campaigns/{campaign_id}/export")
    def export_responses(campaign_id: str):
        return PlainTextResponse(store.export_responses(campaign_id),
                                 media_type="application/jsonl")

    @app.get("/api/campaigns/{campaign_id}/progress")
    def progress(campaign_id: str):
        return store.progress(campaign_id)

    if static_dir is not None:
        from fastapi.staticfiles import StaticFiles
        app.mount("/", StaticFiles(directory=str(static_dir), html=True),
                  name="static")

    return app
