"""Built-in sanity checks runnable from the command line.

Covers the frozen hand-trace vectors for the adaptive coder and an
exhaustive sweep of every sequence over a three-token alphabet up to length
eight, round-tripped through encode and decode.
"""

from __future__ import annotations

import itertools

from .fam_codec import fam_decode, fam_encode

# (tokens, expected code bits in push order, expected dictionary)
HAND_TRACES = [
    ([b"a", b"b", b"a"], [1, 0, 0, 1, 0], [b"b", b"a"]),
    ([b"a", b"a"], [1, 0, 0], [b"a"]),
    ([b"a"], [0], [b"a"]),
]

EXHAUSTIVE_ALPHABET = [b"a", b"b", b"c"]
EXHAUSTIVE_MAX_LEN = 8


def run(log=None) -> int:
    """Run all checks; returns the number of failures (0 is success)."""
    failures = 0

    def note(message: str) -> None:
        if log is not None:
            log(message)

    for tokens, want_bits, want_dict in HAND_TRACES:
        code, w0 = fam_encode(tokens)
        got_bits = list(code)
        if got_bits != want_bits or w0 != want_dict:
            failures += 1
            note(f"FAIL trace {tokens}: bits {got_bits}, dict {w0}")
            continue
        decoded = fam_decode(code.copy(), w0, len(tokens))
        if decoded != tokens:
            failures += 1
            note(f"FAIL trace {tokens}: decoded {decoded}")
            continue
        note(f"ok trace {tokens} -> {want_bits}")

    checked = 0
    bad = 0
    for length in range(1, EXHAUSTIVE_MAX_LEN + 1):
        for combo in itertools.product(EXHAUSTIVE_ALPHABET, repeat=length):
            tokens = list(combo)
            code, w0 = fam_encode(tokens)
            if fam_decode(code, w0, length) != tokens:
                bad += 1
            checked += 1
    if bad:
        failures += 1
        note(f"FAIL exhaustive sweep: {bad} of {checked} sequences broke")
    else:
        note(f"ok exhaustive sweep: {checked} sequences round-tripped")
    return failures
