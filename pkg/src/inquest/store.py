"""Plain-file persistent store for assumptions, rules, and evaluations.

Layout inside the store directory:

    context.json          store identity and settings
    assumptions.json      assumption identities (no histories)
    rules.json            registered selection rules
    evaluations.log.json  one JSON document per line, append-only
    LOCK                  writer lock file

Significance histories are never stored: they are re-derived from the
evaluation log on every load and after every write, so a store can never
disagree with its own log. Every write lands in a temporary file followed
by an atomic rename; an interrupted writer leaves the previous committed
state intact. One writer at a time (the LOCK file); readers need no lock
because they only ever see fully committed files.
"""

import json
import os
from collections import defaultdict
from datetime import datetime, timezone
from pathlib import Path

from filelock import FileLock, Timeout

from .errors import StoreCorruptError, StoreError
from .evaluate import (
    VALIDITY_MODES,
    evaluation_from_dict,
    evaluation_to_dict,
    trend_classify,
    update_significance,
)
from .rules import (
    Assumption,
    assumption_from_dict,
    assumption_to_dict,
    rule_from_dict,
    rule_to_dict,
)

CONTEXT_FILE = "context.json"
ASSUMPTIONS_FILE = "assumptions.json"
RULES_FILE = "rules.json"
LOG_FILE = "evaluations.log.json"
LOCK_FILE = "LOCK"

_LOCK_TIMEOUT = 10.0


def _write_atomic(path: Path, text: str) -> None:
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, path)


def _dump(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


class ExperienceBase:
    """One context's accumulated rules, evaluations, and track records.

    Do not construct directly; use ``open_or_init``.
    """

    def __init__(self, path, context_name, validity_mode, assumptions, rules, log):
        self.path = Path(path)
        self.context_name = context_name
        self.validity_mode = validity_mode
        self._identities = dict(assumptions)  # id -> Assumption, empty history
        self.rules = dict(rules)  # id -> SelectionRule
        self._log = list(log)  # EvaluationResult, commit order
        self.assumptions = {}  # id -> Assumption with derived history
        self._derive()

    # -- loading ------------------------------------------------------------

    @classmethod
    def open_or_init(cls, path, context_name=None, validity_mode="existential"):
        """Load an existing store or initialize an empty one."""
        root = Path(path)
        root.mkdir(parents=True, exist_ok=True)
        context_path = root / CONTEXT_FILE
        if context_path.exists():
            return cls._load(root, expected_context=context_name)
        if validity_mode not in VALIDITY_MODES:
            raise StoreError(f"validity_mode must be one of {VALIDITY_MODES}")
        eb = cls(
            path=root,
            context_name=context_name or "default",
            validity_mode=validity_mode,
            assumptions={},
            rules={},
            log=[],
        )
        with eb._lock():
            eb._write_context()
            _write_atomic(root / ASSUMPTIONS_FILE, _dump({"assumptions": []}))
            _write_atomic(root / RULES_FILE, _dump({"rules": []}))
            _write_atomic(root / LOG_FILE, "")
        return eb

    @classmethod
    def _load(cls, root: Path, expected_context=None):
        context = cls._read_json(root / CONTEXT_FILE)
        context_name = context.get("context_name")
        if not context_name:
            raise StoreCorruptError(f"{root}: context.json has no context_name")
        if expected_context and expected_context != context_name:
            raise StoreError(
                f"store at {root} belongs to context {context_name!r}, "
                f"not {expected_context!r}"
            )
        validity_mode = context.get("validity_mode", "existential")
        if validity_mode not in VALIDITY_MODES:
            raise StoreCorruptError(f"{root}: unknown validity_mode {validity_mode!r}")

        raw = cls._read_json(root / ASSUMPTIONS_FILE)
        assumptions = {}
        for d in raw.get("assumptions", []):
            a = assumption_from_dict(d)
            if a.id in assumptions:
                raise StoreCorruptError(f"{root}: duplicate assumption id {a.id!r}")
            assumptions[a.id] = a

        raw = cls._read_json(root / RULES_FILE)
        rules = {}
        for d in raw.get("rules", []):
            try:
                r = rule_from_dict(d)
            except (ValueError, KeyError, TypeError) as exc:
                raise StoreCorruptError(f"{root}: malformed rule entry: {exc}") from None
            if r.id in rules:
                raise StoreCorruptError(f"{root}: duplicate rule id {r.id!r}")
            if r.assumption_id not in assumptions:
                raise StoreCorruptError(
                    f"{root}: rule {r.id} references unknown assumption {r.assumption_id!r}"
                )
            rules[r.id] = r

        log = []
        seen = set()
        log_path = root / LOG_FILE
        text = log_path.read_text(encoding="utf-8") if log_path.exists() else ""
        for lineno, line in enumerate(text.splitlines(), start=1):
            if not line.strip():
                continue
            try:
                e = evaluation_from_dict(json.loads(line))
            except (ValueError, KeyError, TypeError) as exc:
                raise StoreCorruptError(
                    f"{root}: evaluation log line {lineno}: {exc}"
                ) from None
            if e.rule_id not in rules:
                raise StoreCorruptError(
                    f"{root}: evaluation log line {lineno} references unknown rule "
                    f"{e.rule_id!r}"
                )
            if (e.rule_id, e.run_id) in seen:
                raise StoreCorruptError(
                    f"{root}: evaluation log line {lineno} repeats rule {e.rule_id} "
                    f"for run {e.run_id}"
                )
            seen.add((e.rule_id, e.run_id))
            log.append(e)

        orders = {}
        for e in log:
            if orders.setdefault(e.run_id, e.run_order) != e.run_order:
                raise StoreCorruptError(
                    f"{root}: run {e.run_id} appears with two different run orders"
                )

        return cls(root, context_name, validity_mode, assumptions, rules, log)

    @staticmethod
    def _read_json(path: Path):
        if not path.exists():
            raise StoreCorruptError(f"missing store file: {path}")
        try:
            return json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise StoreCorruptError(f"{path}: not valid JSON: {exc}") from None

    # -- writing ------------------------------------------------------------

    def _lock(self):
        lock = FileLock(str(self.path / LOCK_FILE), timeout=_LOCK_TIMEOUT)
        try:
            lock.acquire()
        except Timeout:
            raise StoreError(
                f"another writer holds the lock on {self.path}"
            ) from None
        return lock

    def _write_context(self):
        _write_atomic(
            self.path / CONTEXT_FILE,
            _dump(
                {
                    "context_name": self.context_name,
                    "created_at": datetime.now(timezone.utc).isoformat(timespec="seconds"),
                    "validity_mode": self.validity_mode,
                }
            ),
        )

    def register(self, assumptions, rules) -> None:
        """Add assumptions and rules; re-registering identical content is a no-op.

        Same id with different content is a conflict. Assumptions land on
        disk before the rules that reference them, so a crash between the
        two writes cannot leave a dangling reference.
        """
        new_identities = dict(self._identities)
        for a in assumptions:
            bare = Assumption(id=a.id, description=a.description, template=a.template)
            existing = new_identities.get(a.id)
            if existing is not None and existing != bare:
                raise StoreError(f"assumption {a.id!r} already registered with different content")
            new_identities[a.id] = bare
        new_rules = dict(self.rules)
        for r in rules:
            existing = new_rules.get(r.id)
            if existing is not None and existing != r:
                raise StoreError(f"rule {r.id!r} already registered with different content")
            if r.assumption_id not in new_identities:
                raise StoreError(
                    f"rule {r.id} references unregistered assumption {r.assumption_id!r}"
                )
            new_rules[r.id] = r

        with self._lock():
            _write_atomic(
                self.path / ASSUMPTIONS_FILE,
                _dump(
                    {
                        "assumptions": [
                            assumption_to_dict(new_identities[k])
                            for k in sorted(new_identities)
                        ]
                    }
                ),
            )
            _write_atomic(
                self.path / RULES_FILE,
                _dump(
                    {
                        "rules": [
                            rule_to_dict(r)
                            for r in sorted(
                                new_rules.values(),
                                key=lambda r: (r.assumption_id, r.canonical),
                            )
                        ]
                    }
                ),
            )
        self._identities = new_identities
        self.rules = new_rules
        self._derive()

    def record_run_evaluations(self, run_id: str, evaluations) -> None:
        """Append one run's evaluations to the log, all or nothing.

        Rejected without touching the store: an empty batch, evaluations
        for unregistered rules or foreign runs, and any (rule, run) pair
        the log already holds.
        """
        batch = list(evaluations)
        if not batch:
            raise StoreError(f"refusing to record an empty evaluation batch for {run_id}")
        existing = {(e.rule_id, e.run_id) for e in self._log}
        batch_keys = set()
        for e in batch:
            if e.run_id != run_id:
                raise StoreError(
                    f"evaluation for run {e.run_id} in a batch recorded as {run_id}"
                )
            if e.rule_id not in self.rules:
                raise StoreError(f"evaluation references unregistered rule {e.rule_id!r}")
            key = (e.rule_id, e.run_id)
            if key in existing or key in batch_keys:
                raise StoreError(
                    f"rule {e.rule_id} already evaluated for run {run_id} (log is append-only)"
                )
            batch_keys.add(key)

        new_log = self._log + batch
        lines = "".join(
            json.dumps(evaluation_to_dict(e), sort_keys=True) + "\n" for e in new_log
        )
        with self._lock():
            _write_atomic(self.path / LOG_FILE, lines)
        self._log = new_log
        self._derive()

    # -- derived views ------------------------------------------------------

    def _derive(self):
        """Recompute significance histories by replaying the log."""
        by_run = defaultdict(list)
        for e in self._log:
            by_run[e.run_id].append(e)
        run_ids = sorted(by_run, key=lambda rid: (by_run[rid][0].run_order, rid))

        derived = dict(self._identities)
        for run_id in run_ids:
            per_assumption = defaultdict(list)
            for e in by_run[run_id]:
                per_assumption[self.rules[e.rule_id].assumption_id].append(e)
            for aid in sorted(per_assumption):
                derived[aid] = update_significance(
                    derived[aid], run_id, per_assumption[aid], mode=self.validity_mode
                )
        self.assumptions = derived

    def evaluations(self) -> list:
        return list(self._log)

    def run_ids(self) -> list:
        """Recorded run ids, ordered by run order."""
        seen = {}
        for e in self._log:
            seen.setdefault(e.run_id, e.run_order)
        return sorted(seen, key=lambda rid: (seen[rid], rid))

    def evaluations_for_rule(self, rule_id: str) -> list:
        return [e for e in self._log if e.rule_id == rule_id]

    def trend_results(self) -> list:
        """Trend classification for every rule with at least one evaluation."""
        by_rule = defaultdict(list)
        for e in self._log:
            by_rule[e.rule_id].append(e)
        return [trend_classify(rid, by_rule[rid]) for rid in sorted(by_rule)]
