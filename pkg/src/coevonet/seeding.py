"""Deterministic seed derivation.

All randomness in a run flows from one 64-bit master seed.  Work items get
their own generator through ``derive_seed(master, label, index)``: the label
(usually the subcommand or experiment name) and item index are hashed with
the master seed through SHA-256 and the first eight bytes become the child
seed.  Results are therefore identical regardless of execution order or
worker count.
"""

from __future__ import annotations

import hashlib

__all__ = ["derive_seed"]


def derive_seed(master: int, label: str, index: int) -> int:
    """64-bit child seed for work item ``index`` of stream ``label``."""
    payload = f"{master:#x}:{label}:{index}".encode()
    digest = hashlib.sha256(payload).digest()
    return int.from_bytes(digest[:8], "little")
