from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field


@dataclass
class Trace:
    """Counters and an ordered event log filled in by the drivers when passed."""

    counters: Counter = field(default_factory=Counter)
    events: list = field(default_factory=list)
    maxima: dict = field(default_factory=dict)

    def count(self, key: str, k: int = 1) -> None:
        self.counters[key] += k

    def log(self, *event) -> None:
        self.events.append(event)

    def high(self, key: str, value) -> None:
        if key not in self.maxima or value > self.maxima[key]:
            self.maxima[key] = value

    def of(self, kind: str) -> list:
        return [e for e in self.events if e and e[0] == kind]
