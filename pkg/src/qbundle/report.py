"""Pass/fail bookkeeping shared by all verification routines."""
from __future__ import annotations

from dataclasses import dataclass, field


PASS, FAIL, SKIP = "pass", "fail", "skipped"


def _plain(x):
    """Make a witness JSON friendly (scalars and words become strings)."""
    if x is None or isinstance(x, (bool, int, str)):
        return x
    if isinstance(x, float):
        return repr(x)
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    return str(x)


@dataclass
class Check:
    name: str
    status: str
    witness: object = None
    detail: str = ""
    params: dict = field(default_factory=dict)

    @property
    def ok(self):
        return self.status == PASS

    def to_dict(self):
        d = {"check": self.name, "status": self.status}
        if self.params:
            d["params"] = _plain(self.params)
        if self.witness is not None:
            d["witness"] = _plain(self.witness)
        if self.detail:
            d["detail"] = self.detail
        return d


@dataclass
class Report:
    title: str = ""
    checks: list = field(default_factory=list)
    data: dict = field(default_factory=dict)

    def add(self, name, ok, witness=None, detail="", **params):
        self.checks.append(Check(name, PASS if ok else FAIL, None if ok else witness, detail, params))
        return ok

    def skip(self, name, reason):
        self.checks.append(Check(name, SKIP, None, reason))

    def extend(self, other, prefix=""):
        for c in other.checks:
            self.checks.append(Check(prefix + c.name, c.status, c.witness, c.detail, c.params))
        self.data.update(other.data)
        return self

    @property
    def passed(self):
        return all(c.status != FAIL for c in self.checks)

    def __bool__(self):
        return self.passed

    @property
    def failures(self):
        return [c for c in self.checks if c.status == FAIL]

    def get(self, name):
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self):
        return {
            "title": self.title,
            "status": PASS if self.passed else FAIL,
            "checks": [c.to_dict() for c in self.checks],
        }

    def lines(self):
        out = []
        for c in self.checks:
            tail = f"  witness={_plain(c.witness)}" if c.status == FAIL and c.witness is not None else ""
            if c.status == SKIP:
                tail = f"  ({c.detail})"
            out.append(f"[{c.status.upper():7}] {c.name}{tail}")
        return out

    def __str__(self):
        head = f"{self.title}: {'PASS' if self.passed else 'FAIL'}"
        return "\n".join([head] + ["  " + l for l in self.lines()])
