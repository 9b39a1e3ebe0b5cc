"""Filesystem-backed state for the annotation service.

Each dataset is a flat directory tree:

    <data_root>/<dataset_id>/
        manifest.json
        images/...              source images
        gt/...                  hidden ground-truth masks (indexed PNG)
        sessions/               per-session state + latest refined masks
        submissions/masks/      persisted masks of passed batches
        submissions/log.jsonl   append-only submission log

Sessions carry a hidden per-image ground-truth flag that is stored
server-side only; client views are built exclusively through
`session_view`, which never includes it. Manifests are immutable after
load; per-session mutation is serialized by a per-session lock.
"""

from __future__ import annotations

import io
import json
import logging
import threading
import time
import uuid
import zipfile
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from PIL import Image

from .. import engine
from ..errors import (
    EmptyTraceError,
    IncompleteBatchError,
    InsufficientImagesError,
    NotInSessionError,
    ScribbleSegError,
    UnknownDatasetError,
    UnknownImageError,
    UnknownSessionError,
)
from ..evaluation import checkpoint_gate, final_score, iou
from ..maskpng import Palette, encode_mask_png, load_mask_png, save_mask_png
from ..strokes import StrokeDocument

logger = logging.getLogger(__name__)


class SessionClosedError(ScribbleSegError):
    """The batch has already passed; no further edits accepted."""


@dataclass(frozen=True)
class CheckpointPolicy:
    batch_size: int = 3
    ground_truth_per_batch: int = 1
    threshold: float = 0.70


@dataclass(frozen=True)
class ImageEntry:
    image_id: str
    path: Path
    gt_path: Path | None
    width: int
    height: int
    object_count: int
    boxes: tuple[tuple[int, int, int, int], ...] = ()


@dataclass(frozen=True)
class Dataset:
    dataset_id: str
    root: Path
    categories: tuple[dict, ...]
    palette: Palette
    scored_categories: frozenset[int]
    policy: CheckpointPolicy
    images: dict[str, ImageEntry]

    @property
    def sessions_dir(self) -> Path:
        return self.root / "sessions"

    @property
    def submissions_dir(self) -> Path:
        return self.root / "submissions"

    def summary(self) -> dict:
        return {
            "dataset_id": self.dataset_id,
            "categories": [dict(c) for c in self.categories],
            "image_count": len(self.images),
            "checkpoint": {
                "batch_size": self.policy.batch_size,
                "threshold": self.policy.threshold,
            },
        }


@dataclass
class ImageState:
    strokes: dict | None = None
    stroke_count: int = 0
    labeled_pixels: int = 0
    first_trace_at: float | None = None
    refine_count: int = 0
    mask_file: str | None = None

    def to_dict(self) -> dict:
        return {
            "strokes": self.strokes,
            "stroke_count": self.stroke_count,
            "labeled_pixels": self.labeled_pixels,
            "first_trace_at": self.first_trace_at,
            "refine_count": self.refine_count,
            "mask_file": self.mask_file,
        }

    @classmethod
    def from_dict(cls, raw: dict) -> "ImageState":
        return cls(**raw)


@dataclass
class Session:
    session_id: str
    user_id: str
    dataset_id: str
    rng_seed: int
    batch: list[str]
    checkpoint_ids: set[str]  # hidden: which batch images carry ground truth
    status: str = "in_progress"
    attempt: int = 1
    created_at: float = 0.0
    images: dict[str, ImageState] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "session_id": self.session_id,
            "user_id": self.user_id,
            "dataset_id": self.dataset_id,
            "rng_seed": self.rng_seed,
            "batch": self.batch,
            "checkpoint_ids": sorted(self.checkpoint_ids),
            "status": self.status,
            "attempt": self.attempt,
            "created_at": self.created_at,
            "images": {k: v.to_dict() for k, v in self.images.items()},
        }

    @classmethod
    def from_dict(cls, raw: dict) -> "Session":
        return cls(
            session_id=raw["session_id"],
            user_id=raw["user_id"],
            dataset_id=raw["dataset_id"],
            rng_seed=raw["rng_seed"],
            batch=list(raw["batch"]),
            checkpoint_ids=set(raw["checkpoint_ids"]),
            status=raw["status"],
            attempt=raw["attempt"],
            created_at=raw["created_at"],
            images={k: ImageState.from_dict(v) for k, v in raw["images"].items()},
        )


def _load_manifest(dataset_dir: Path) -> Dataset:
    manifest = json.loads((dataset_dir / "manifest.json").read_text())
    dataset_id = manifest["dataset_id"]
    categories = tuple(manifest["categories"])
    if len(categories) > 254:
        raise ValueError("at most 254 categories supported")
    colors = [tuple(c["color"]) for c in categories]
    palette = Palette.from_colors(colors)
    scored = frozenset(
        int(c) for c in manifest.get("scored_categories", [c["id"] for c in categories])
    )
    checkpoint = manifest.get("checkpoint", {})
    policy = CheckpointPolicy(
        batch_size=int(checkpoint.get("batch_size", 3)),
        ground_truth_per_batch=int(checkpoint.get("ground_truth_per_batch", 1)),
        threshold=float(checkpoint.get("threshold", 0.70)),
    )
    images: dict[str, ImageEntry] = {}
    for item in manifest["images"]:
        path = dataset_dir / item["file"]
        with Image.open(path) as img:
            width, height = img.size
        gt_path = None
        if item.get("ground_truth"):
            gt_path = dataset_dir / item["ground_truth"]
            gt = load_mask_png(gt_path)
            if gt.shape != (height, width):
                raise ValueError(f"ground truth for {item['id']} has wrong dimensions")
            bad = (gt != 255) & (gt >= palette.num_categories)
            if bad.any():
                raise ValueError(f"ground truth for {item['id']} has out-of-palette values")
        entry = ImageEntry(
            image_id=item["id"],
            path=path,
            gt_path=gt_path,
            width=width,
            height=height,
            object_count=int(item.get("object_count", 1)),
            boxes=tuple(tuple(int(v) for v in b) for b in item.get("boxes", [])),
        )
        images[entry.image_id] = entry
    return Dataset(
        dataset_id=dataset_id,
        root=dataset_dir,
        categories=categories,
        palette=palette,
        scored_categories=scored,
        policy=policy,
        images=images,
    )


class AnnotationStore:
    """All service state: datasets, sessions, submissions."""

    def __init__(self, data_root: str | Path, rng_seed: int = 0, clock=time.time):
        self.data_root = Path(data_root)
        if not self.data_root.is_dir():
            raise FileNotFoundError(f"data root {self.data_root} does not exist")
        self.clock = clock
        self._rng = np.random.default_rng(rng_seed & 0xFFFFFFFFFFFFFFFF)
        self._datasets: dict[str, Dataset] = {}
        self._sessions: dict[str, Session] = {}
        self._assigned: dict[tuple[str, str], set[str]] = {}
        self._locks: dict[str, threading.Lock] = {}
        self._store_lock = threading.Lock()
        self._load_datasets()
        self._load_sessions()

    # -- loading ---------------------------------------------------------

    def _load_datasets(self) -> None:
        for entry in sorted(self.data_root.iterdir()):
            if not entry.is_dir() or not (entry / "manifest.json").is_file():
                continue
            try:
                dataset = _load_manifest(entry)
            except Exception as exc:
                logger.warning("skipping dataset at %s: %s", entry, exc)
                continue
            self._datasets[dataset.dataset_id] = dataset

    def _load_sessions(self) -> None:
        for dataset in self._datasets.values():
            if not dataset.sessions_dir.is_dir():
                continue
            for path in sorted(dataset.sessions_dir.glob("*.json")):
                try:
                    session = Session.from_dict(json.loads(path.read_text()))
                except Exception as exc:
                    logger.warning("skipping session file %s: %s", path, exc)
                    continue
                self._sessions[session.session_id] = session
                key = (session.user_id, session.dataset_id)
                self._assigned.setdefault(key, set()).update(session.batch)

    # -- helpers ---------------------------------------------------------

    def _dataset(self, dataset_id: str) -> Dataset:
        if dataset_id not in self._datasets:
            raise UnknownDatasetError(f"no dataset {dataset_id!r}")
        return self._datasets[dataset_id]

    def _session(self, session_id: str) -> Session:
        if session_id not in self._sessions:
            raise UnknownSessionError(f"no session {session_id!r}")
        return self._sessions[session_id]

    def _lock(self, session_id: str) -> threading.Lock:
        with self._store_lock:
            return self._locks.setdefault(session_id, threading.Lock())

    def _persist(self, session: Session) -> None:
        dataset = self._dataset(session.dataset_id)
        dataset.sessions_dir.mkdir(parents=True, exist_ok=True)
        path = dataset.sessions_dir / f"{session.session_id}.json"
        path.write_text(json.dumps(session.to_dict(), indent=1))

    def _session_mask_path(self, session: Session, image_id: str) -> Path:
        dataset = self._dataset(session.dataset_id)
        return dataset.sessions_dir / f"{session.session_id}__{image_id}.png"

    # -- dataset API -----------------------------------------------------

    def list_datasets(self) -> list[dict]:
        return [self._datasets[k].summary() for k in sorted(self._datasets)]

    def image_file(self, image_id: str, dataset_id: str | None = None) -> Path:
        candidates = []
        for ds_id in sorted(self._datasets):
            if dataset_id is not None and ds_id != dataset_id:
                continue
            entry = self._datasets[ds_id].images.get(image_id)
            if entry is not None:
                candidates.append(entry.path)
        if not candidates:
            raise UnknownImageError(f"no image {image_id!r}")
        if len(candidates) > 1:
            raise ScribbleSegError(
                f"image id {image_id!r} is ambiguous; pass dataset_id"
            )
        return candidates[0]

    # -- session API -----------------------------------------------------

    def create_session(self, user_id: str, dataset_id: str) -> Session:
        dataset = self._dataset(dataset_id)
        policy = dataset.policy
        with self._store_lock:
            taken = self._assigned.setdefault((user_id, dataset_id), set())
            gt_pool = sorted(
                i for i, e in dataset.images.items() if e.gt_path and i not in taken
            )
            plain_pool = sorted(
                i for i, e in dataset.images.items() if not e.gt_path and i not in taken
            )
            need_gt = policy.ground_truth_per_batch
            need_plain = policy.batch_size - need_gt
            if len(gt_pool) < need_gt or len(plain_pool) < need_plain:
                raise InsufficientImagesError(
                    f"dataset {dataset_id!r} cannot assemble a fresh batch for {user_id!r}"
                )
            chosen_gt = list(self._rng.choice(gt_pool, size=need_gt, replace=False))
            chosen_plain = list(self._rng.choice(plain_pool, size=need_plain, replace=False))
            batch = [str(i) for i in chosen_gt + chosen_plain]
            self._rng.shuffle(batch)
            session = Session(
                session_id=uuid.uuid4().hex[:12],
                user_id=user_id,
                dataset_id=dataset_id,
                rng_seed=int(self._rng.integers(0, 2**63)),
                batch=batch,
                checkpoint_ids={str(i) for i in chosen_gt},
                created_at=self.clock(),
                images={str(i): ImageState() for i in batch},
            )
            taken.update(batch)
            self._sessions[session.session_id] = session
        self._persist(session)
        return session

    def _checked_image(self, session: Session, image_id: str) -> ImageEntry:
        if image_id not in session.batch:
            raise NotInSessionError(f"image {image_id!r} is not in this session's batch")
        return self._dataset(session.dataset_id).images[image_id]

    def put_trace(self, session_id: str, image_id: str, doc: dict) -> dict:
        with self._lock(session_id):
            session = self._session(session_id)
            if session.status == "passed":
                raise SessionClosedError("batch already passed")
            entry = self._checked_image(session, image_id)
            document = StrokeDocument.from_dict(doc)
            if (document.width, document.height) != (entry.width, entry.height):
                raise ScribbleSegError(
                    "stroke document dimensions do not match the image"
                )
            dataset = self._dataset(session.dataset_id)
            known = {int(c["id"]) for c in dataset.categories}
            for stroke in document.strokes:
                if stroke.tool != "eraser" and stroke.category not in known:
                    raise ScribbleSegError(
                        f"stroke category {stroke.category} not in the dataset's categories"
                    )
            raster = document.rasterize()
            state = session.images[image_id]
            state.strokes = document.to_dict()
            state.stroke_count = len(document.strokes)
            state.labeled_pixels = int(np.count_nonzero(raster != engine.UNLABELED))
            if state.first_trace_at is None and state.stroke_count > 0:
                state.first_trace_at = self.clock()
            if session.status == "failed":
                session.status = "in_progress"
            self._persist(session)
            return {
                "image_id": image_id,
                "stroke_count": state.stroke_count,
                "labeled_pixels": state.labeled_pixels,
            }

    def refine_image(self, session_id: str, image_id: str) -> dict:
        with self._lock(session_id):
            session = self._session(session_id)
            if session.status == "passed":
                raise SessionClosedError("batch already passed")
            entry = self._checked_image(session, image_id)
            state = session.images[image_id]
            if not state.strokes or state.labeled_pixels == 0:
                raise EmptyTraceError("no labeled trace pixels for this image")
            dataset = self._dataset(session.dataset_id)
            document = StrokeDocument.from_dict(state.strokes)
            trace = document.rasterize()
            with Image.open(entry.path) as img:
                rgb = np.asarray(img.convert("RGB"))
            result = engine.refine(
                rgb, trace, engine.GrowConfig(rng_seed=session.rng_seed)
            )
            mask_path = self._session_mask_path(session, image_id)
            mask_path.parent.mkdir(parents=True, exist_ok=True)
            save_mask_png(mask_path, result.label_mask, dataset.palette)
            state.mask_file = mask_path.name
            state.refine_count += 1
            self._persist(session)
            return {
                "image_id": image_id,
                "refine_count": state.refine_count,
                "mask_png": encode_mask_png(result.label_mask, dataset.palette),
                "likelihood_summary": _likelihood_summary(result),
            }

    def submit_batch(self, session_id: str) -> dict:
        with self._lock(session_id):
            session = self._session(session_id)
            if session.status == "passed":
                raise SessionClosedError("batch already passed")
            dataset = self._dataset(session.dataset_id)
            missing = [
                i
                for i in session.batch
                if session.images[i].refine_count == 0
                or not self._session_mask_path(session, i).is_file()
            ]
            if missing:
                raise IncompleteBatchError(
                    f"images not refined yet: {', '.join(sorted(missing))}"
                )
            verdicts: list[bool] = []
            reports: dict[str, dict] = {}
            scores_by_image: dict[str, dict] = {}
            for image_id in session.batch:
                if image_id not in session.checkpoint_ids:
                    continue
                entry = dataset.images[image_id]
                pred = load_mask_png(self._session_mask_path(session, image_id))
                gt = load_mask_png(entry.gt_path)
                report = iou(pred, gt, set(dataset.scored_categories))
                verdicts.append(checkpoint_gate(report, dataset.policy.threshold))
                state = session.images[image_id]
                elapsed = max(0.0, self.clock() - (state.first_trace_at or self.clock()))
                score = final_score(report.mean_iou, elapsed, entry.object_count)
                scores_by_image[image_id] = score.to_dict()
                reports[image_id] = report.to_dict()
            passed = all(verdicts)
            # client response never links a score to an image id, so the
            # hidden checkpoint assignment stays hidden
            scores = sorted(scores_by_image.values(), key=lambda s: -s["final_score"])
            if passed:
                session.status = "passed"
                self._record_submissions(session, dataset, reports, scores_by_image)
            else:
                session.status = "failed"
                session.attempt += 1
                for image_id in session.batch:
                    state = session.images[image_id]
                    state.strokes = None
                    state.stroke_count = 0
                    state.labeled_pixels = 0
                    state.mask_file = None
                    mask_path = self._session_mask_path(session, image_id)
                    if mask_path.is_file():
                        mask_path.unlink()
            self._persist(session)
            return {"passed": passed, "scores": scores}

    def _record_submissions(
        self,
        session: Session,
        dataset: Dataset,
        reports: dict[str, dict],
        scores_by_image: dict[str, dict],
    ) -> None:
        masks_dir = dataset.submissions_dir / "masks"
        masks_dir.mkdir(parents=True, exist_ok=True)
        log_path = dataset.submissions_dir / "log.jsonl"
        with open(log_path, "a") as log:
            for image_id in session.batch:
                record_id = uuid.uuid4().hex
                mask_file = f"masks/{record_id}.png"
                data = self._session_mask_path(session, image_id).read_bytes()
                (masks_dir / f"{record_id}.png").write_bytes(data)
                row = {
                    "record_id": record_id,
                    "user_id": session.user_id,
                    "session_id": session.session_id,
                    "image_id": image_id,
                    "mask_file": mask_file,
                    "iou": reports.get(image_id),
                    "score": scores_by_image.get(image_id),
                    "created_at": self.clock(),
                }
                log.write(json.dumps(row) + "\n")
            log.flush()

    # -- export ----------------------------------------------------------

    def export_zip(self, dataset_id: str) -> bytes:
        dataset = self._dataset(dataset_id)
        buf = io.BytesIO()
        with zipfile.ZipFile(buf, "w", zipfile.ZIP_DEFLATED) as archive:
            masks_dir = dataset.submissions_dir / "masks"
            if masks_dir.is_dir():
                for path in sorted(masks_dir.glob("*.png")):
                    archive.writestr(f"masks/{path.name}", path.read_bytes())
            log_path = dataset.submissions_dir / "log.jsonl"
            if log_path.is_file():
                archive.writestr("log.jsonl", log_path.read_bytes())
        return buf.getvalue()

    # -- client views ----------------------------------------------------

    def session_view(self, session_id: str) -> dict:
        session = self._session(session_id)
        dataset = self._dataset(session.dataset_id)
        now = self.clock()
        images = []
        for image_id in session.batch:
            entry = dataset.images[image_id]
            state = session.images[image_id]
            elapsed = now - state.first_trace_at if state.first_trace_at else 0.0
            images.append(
                {
                    "image_id": image_id,
                    "width": entry.width,
                    "height": entry.height,
                    "object_count": entry.object_count,
                    "boxes": [list(b) for b in entry.boxes],
                    "stroke_count": state.stroke_count,
                    "labeled_pixels": state.labeled_pixels,
                    "refine_count": state.refine_count,
                    "refined": state.mask_file is not None,
                    "elapsed_s": round(max(0.0, elapsed), 3),
                }
            )
        return {
            "session_id": session.session_id,
            "user_id": session.user_id,
            "dataset_id": session.dataset_id,
            "batch_status": session.status,
            "attempt": session.attempt,
            "images": images,
        }


def _likelihood_summary(result: engine.RefineResult) -> list[dict]:
    summary = []
    for c in range(result.num_categories):
        member = result.label_mask == c
        mean_likelihood = float(result.likelihood[member, c].mean()) if member.any() else 0.0
        summary.append(
            {
                "category": c,
                "pixel_fraction": round(float(member.mean()), 6),
                "mean_likelihood": round(mean_likelihood, 6),
            }
        )
    return summary
