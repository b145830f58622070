"""Persistent vector-indexed memory of learner archives and teaching experiences.

Storage is an append-only JSONL log plus periodic snapshots; retrieval is an
exact cosine-similarity scan (stores hold thousands of records, not millions),
ties broken by ascending record id. Writes are serialized; readers work on
consistent in-memory state.
"""

from __future__ import annotations

import json
import os
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Iterable

import numpy as np

from .domain import CurriculumPlan, LearnerModel, TranscriptTurn, TurnKind
from .errors import DimMismatchError, StorageIOError
from .gateway import Gateway

SNAPSHOT_EVERY = 100


@dataclass(frozen=True)
class MemoryRecord:
    id: str
    kind: str  # learner_archive | teaching_experience
    text: str
    vector: tuple[float, ...]
    metadata: dict[str, Any] = field(default_factory=dict)
    created_at: float = 0.0

    def to_dict(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "kind": self.kind,
            "text": self.text,
            "vector": list(self.vector),
            "metadata": self.metadata,
            "created_at": self.created_at,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "MemoryRecord":
        return cls(
            id=str(data["id"]),
            kind=str(data["kind"]),
            text=str(data["text"]),
            vector=tuple(float(x) for x in data["vector"]),
            metadata=dict(data.get("metadata", {})),
            created_at=float(data.get("created_at", 0.0)),
        )


class MemoryStore:
    def __init__(self, root: str | Path, dim: int, clock: Callable[[], float] = time.time):
        self.root = Path(root)
        self.dim = dim
        self.clock = clock
        self._records: dict[str, MemoryRecord] = {}
        self._seq = 0
        self._puts_since_snapshot = 0
        self._write_lock = threading.Lock()
        self.root.mkdir(parents=True, exist_ok=True)
        (self.root / "snapshots").mkdir(exist_ok=True)
        self._load()

    # -- lifecycle -----------------------------------------------------------

    def _meta_path(self) -> Path:
        return self.root / "meta.json"

    def _log_path(self) -> Path:
        return self.root / "records.jsonl"

    def _load(self) -> None:
        meta_path = self._meta_path()
        if meta_path.exists():
            meta = json.loads(meta_path.read_text(encoding="utf-8"))
            if int(meta["dim"]) != self.dim:
                raise DimMismatchError(f"store dim {meta['dim']} != requested {self.dim}")
        else:
            meta_path.write_text(
                json.dumps({"dim": self.dim, "kind": "vector-memory"}), encoding="utf-8"
            )

        snapshot = self._latest_snapshot()
        offset = 0
        if snapshot is not None:
            data = json.loads(snapshot.read_text(encoding="utf-8"))
            offset = int(data["log_offset"])
            self._seq = int(data["seq"])
            for raw in data["records"]:
                record = MemoryRecord.from_dict(raw)
                self._records[record.id] = record

        log = self._log_path()
        if log.exists():
            with log.open("rb") as fh:
                fh.seek(offset)
                for line in fh:
                    if not line.strip():
                        continue
                    self._apply(json.loads(line.decode("utf-8")))

    def _latest_snapshot(self) -> Path | None:
        snaps = sorted((self.root / "snapshots").glob("snap-*.json"))
        return snaps[-1] if snaps else None

    def _apply(self, entry: dict[str, Any]) -> None:
        op = entry.get("op", "put")
        if op == "put":
            record = MemoryRecord.from_dict(entry["record"])
            self._records[record.id] = record
            self._seq = max(self._seq, int(record.id.split("-")[-1]))
        elif op == "delete":
            self._records.pop(str(entry["id"]), None)

    # -- writes ----------------------------------------------------------------

    def put(self, kind: str, text: str, vector: Iterable[float], metadata: dict[str, Any] | None = None) -> str:
        values = tuple(float(x) for x in vector)
        if len(values) != self.dim:
            raise DimMismatchError(f"vector dim {len(values)} != store dim {self.dim}")
        if not text.strip():
            raise ValueError("memory text must be non-empty")
        with self._write_lock:
            self._seq += 1
            record = MemoryRecord(
                id=f"mem-{self._seq:08d}",
                kind=kind,
                text=text,
                vector=values,
                metadata=dict(metadata or {}),
                created_at=self.clock(),
            )
            self._append_log({"op": "put", "record": record.to_dict()})
            self._records[record.id] = record
            self._puts_since_snapshot += 1
            if self._puts_since_snapshot >= SNAPSHOT_EVERY:
                self.snapshot()
        return record.id

    def delete(self, record_id: str) -> bool:
        with self._write_lock:
            if record_id not in self._records:
                return False
            self._append_log({"op": "delete", "id": record_id})
            del self._records[record_id]
        return True

    def _append_log(self, entry: dict[str, Any]) -> None:
        try:
            with self._log_path().open("ab") as fh:
                fh.write(json.dumps(entry, sort_keys=True, separators=(",", ":")).encode("utf-8"))
                fh.write(b"\n")
                fh.flush()
                os.fsync(fh.fileno())
        except OSError as exc:
            raise StorageIOError(str(exc)) from exc

    def snapshot(self) -> Path:
        """Durable full-state dump; later loads replay only the log tail."""
        offset = self._log_path().stat().st_size if self._log_path().exists() else 0
        payload = {
            "seq": self._seq,
            "log_offset": offset,
            "records": [r.to_dict() for r in self._records.values()],
        }
        path = self.root / "snapshots" / f"snap-{self._seq:08d}.json"
        try:
            path.write_text(json.dumps(payload, sort_keys=True), encoding="utf-8")
        except OSError as exc:
            raise StorageIOError(str(exc)) from exc
        self._puts_since_snapshot = 0
        return path

    # -- reads -----------------------------------------------------------------

    def get(self, record_id: str) -> MemoryRecord | None:
        return self._records.get(record_id)

    def __len__(self) -> int:
        return len(self._records)

    def query_vector(
        self,
        query: Iterable[float],
        k: int,
        where: Callable[[dict[str, Any]], bool] | None = None,
    ) -> list[tuple[MemoryRecord, float]]:
        if k < 1:
            raise ValueError("k must be >= 1")
        qv = np.asarray(tuple(query), dtype=float)
        if qv.shape[0] != self.dim:
            raise DimMismatchError(f"query dim {qv.shape[0]} != store dim {self.dim}")
        pool = [r for r in self._records.values() if where is None or where(r.metadata)]
        if not pool:
            return []
        matrix = np.array([r.vector for r in pool])
        qnorm = float(np.linalg.norm(qv))
        norms = np.linalg.norm(matrix, axis=1) * (qnorm if qnorm > 0 else 1.0)
        norms[norms == 0] = 1.0
        sims = matrix @ qv / norms
        ranked = sorted(zip(pool, sims), key=lambda pair: (-pair[1], pair[0].id))
        return [(record, float(sim)) for record, sim in ranked[:k]]


class VectorMemory:
    """Gateway-embedding front end over a MemoryStore."""

    def __init__(self, store: MemoryStore, gateway: Gateway):
        if store.dim != gateway.embed_dim:
            raise DimMismatchError(
                f"store dim {store.dim} != embedding dim {gateway.embed_dim}"
            )
        self.store = store
        self.gateway = gateway

    def put(self, kind: str, text: str, metadata: dict[str, Any] | None = None) -> str:
        return self.store.put(kind, text, self.gateway.embed(text), metadata)

    def query(
        self,
        text: str,
        k: int,
        where: Callable[[dict[str, Any]], bool] | None = None,
    ) -> list[tuple[MemoryRecord, float]]:
        if len(self.store) == 0:
            return []
        return self.store.query_vector(self.gateway.embed(text), k, where)

    def archive_session(
        self,
        transcript: list[TranscriptTurn],
        model: LearnerModel,
        plan: CurriculumPlan,
        session_id: str = "",
        ablated: bool = False,
    ) -> list[str]:
        """One learner archive plus one teaching experience per lesson turn."""
        if ablated:
            return []
        ids: list[str] = []
        summary_lines = [
            f"{v.level.label}:{v.sub_goal_id}={v.proficiency:.2f}"
            for v in sorted(model.vertices.values(), key=lambda v: (v.level, v.sub_goal_id))
        ]
        archive_text = (
            f"goal={plan.goal} final_level={model.current_level.label} "
            f"overall={model.overall:.3f} | " + " ".join(summary_lines)
        )
        ids.append(
            self.put(
                "learner_archive",
                archive_text,
                {"goal": plan.goal, "level": model.current_level.label, "session_id": session_id},
            )
        )
        for turn in transcript:
            if turn.kind is TurnKind.LESSON:
                outcome = f"proficiency after turn: {model.overall:.3f}"
                ids.append(
                    self.put(
                        "teaching_experience",
                        f"{turn.content}\n{outcome}",
                        {
                            "goal": plan.goal,
                            "level": model.current_level.label,
                            "session_id": session_id,
                            "turn": turn.index,
                        },
                    )
                )
        return ids
