"""Accept/reject results shared by the GS checker and the Herbrand checker."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Dict, List, Mapping, Optional, Tuple


@dataclass(frozen=True)
class Verdict:
    ok: bool
    code: str = "ok"
    detail: str = ""
    node: Optional[Tuple[int, ...]] = None
    member: Optional[int] = None
    witness: Optional[int] = None
    variable: Optional[str] = None
    assignment: Optional[Mapping[str, bool]] = None

    @classmethod
    def accept(cls) -> "Verdict":
        return cls(True)

    @classmethod
    def reject(cls, code: str, detail: str = "", **location: Any) -> "Verdict":
        return cls(False, code, detail, **location)

    def __bool__(self) -> bool:
        return self.ok

    def as_dict(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {"ok": self.ok, "code": self.code}
        if self.detail:
            out["detail"] = self.detail
        if self.node is not None:
            out["node"] = "/".join(str(i) for i in self.node) or "root"
        for key in ("member", "witness", "variable"):
            value = getattr(self, key)
            if value is not None:
                out[key] = value
        if self.assignment is not None:
            out["assignment"] = dict(self.assignment)
        return out

    def lines(self) -> List[str]:
        """KEY: value rendering used by the command line."""
        out = [f"RESULT: {'ok' if self.ok else 'rejected'}"]
        for key, value in self.as_dict().items():
            if key in ("ok",):
                continue
            if key == "assignment":
                rendered = ", ".join(f"{atom}={'T' if v else 'F'}" for atom, v in value.items())
                out.append(f"ASSIGNMENT: {rendered}")
            else:
                out.append(f"{key.upper()}: {value}")
        return out
