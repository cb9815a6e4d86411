"""Minimal operation labels from (source, target) sentence pairs.

Two routes:

1. When the two sentences have equal character multisets, the pair may be a
   pure word-order error; we look for a two-block swap that turns the source
   into the target and emit a single Switch.
2. Otherwise, among all unit-cost minimum alignments, the one whose merged
   non-copy runs give the fewest Delete/Insert/Modify items is chosen
   (ties broken by the fixed move preference Copy > Modify > Delete >
   Insert) and those runs become the operation items.

``normalize_reference`` re-derives an annotated reference from its realized
target, unifying equivalent annotations into this minimal form.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .core import InsertItem, ModifyItem, Reference, Switch, apply_reference
from .errors import EmptyInput, NoCommonSubstring, PreconditionViolated

COPY, MODIFY, DELETE, INSERT = "copy", "modify", "delete", "insert"


@dataclass(frozen=True)
class Occurrence:
    """A common substring pinned to one occurrence in each sentence."""

    start_s: int
    start_t: int
    length: int
    text: str


@dataclass(frozen=True)
class CommonSubstringPair:
    """Longest common substring plus the longest one disjoint from it."""

    s1: Occurrence
    s2: Occurrence | None


def _ending_lengths(s: str, t: str):
    """m[i][j] = length of the longest common substring ending at s[i-1], t[j-1]."""
    n, m = len(s), len(t)
    table = [[0] * (m + 1) for _ in range(n + 1)]
    for i in range(1, n + 1):
        row = table[i]
        prev = table[i - 1]
        ci = s[i - 1]
        for j in range(1, m + 1):
            if ci == t[j - 1]:
                row[j] = prev[j - 1] + 1
    return table


def longest_common_substring_pair(s: str, t: str) -> CommonSubstringPair:
    """Longest common substring and the second longest disjoint from it.

    Ties break on leftmost start in ``s``, then leftmost start in ``t``.
    Disjointness of the second substring is required in both sentences.
    """
    if not s or not t:
        raise NoCommonSubstring("empty input")
    table = _ending_lengths(s, t)
    best = None  # (length, start_s, start_t)
    for i in range(1, len(s) + 1):
        for j in range(1, len(t) + 1):
            length = table[i][j]
            if length == 0:
                continue
            cand = (length, i - length, j - length)
            if best is None or (-cand[0], cand[1], cand[2]) < (-best[0], best[1], best[2]):
                best = cand
    if best is None:
        raise NoCommonSubstring(f"no common code point between {s!r} and {t!r}")
    l1, a, b = best
    s1 = Occurrence(a, b, l1, s[a : a + l1])

    def cap(end, lo, hi):
        # longest usable run ending at `end` whose span avoids [lo, hi)
        return end if end <= lo else max(0, end - hi)

    second = None
    for i in range(1, len(s) + 1):
        for j in range(1, len(t) + 1):
            length = min(table[i][j], cap(i, a, a + l1), cap(j, b, b + l1))
            if length == 0:
                continue
            cand = (length, i - length, j - length)
            if second is None or (-cand[0], cand[1], cand[2]) < (
                -second[0],
                second[1],
                second[2],
            ):
                second = cand
    s2 = None
    if second is not None:
        l2, c, d = second
        s2 = Occurrence(c, d, l2, s[c : c + l2])
    return CommonSubstringPair(s1, s2)


def _swap_permutation(n: int, first: tuple[int, int], second: tuple[int, int]):
    """Permutation that exchanges two disjoint index blocks of ``range(n)``."""
    (x0, x1), (y0, y1) = sorted([first, second])
    return tuple(
        [*range(0, x0), *range(y0, y1), *range(x1, y0), *range(x0, x1), *range(y1, n)]
    )


def try_switch_derivation(s: str, t: str) -> Reference | None:
    """Single-Switch reference when a two-block swap turns ``s`` into ``t``.

    Tries the literal (longest, second-longest) common-substring swap first,
    then a complete search for end-anchored block pairs on the core left
    after stripping the common prefix and suffix. Returns ``None`` when no
    two-block swap realizes the target.
    """
    if Counter(s) != Counter(t):
        raise PreconditionViolated("character frequency multisets differ")
    if s == t:
        return None
    n = len(s)

    pair = longest_common_substring_pair(s, t)
    if pair.s2 is not None:
        a, l1 = pair.s1.start_s, pair.s1.length
        c, l2 = pair.s2.start_s, pair.s2.length
        perm = _swap_permutation(n, (a, a + l1), (c, c + l2))
        if "".join(s[i] for i in perm) == t:
            return Reference(switch=Switch(perm))

    # Complete search: strip common affixes, then the swapped blocks must sit
    # at the ends of the remaining core (S' = A m B, T' = B m A).
    p = 0
    while p < n and s[p] == t[p]:
        p += 1
    q = 0
    while q < n - p and s[n - 1 - q] == t[n - 1 - q]:
        q += 1
    core_s, core_t = s[p : n - q], t[p : n - q]
    k = len(core_s)
    for a in range(k - 1, 0, -1):
        if core_s[:a] != core_t[k - a :]:
            continue
        for b in range(k - a, 0, -1):
            if core_s[k - b :] == core_t[:b] and core_s[a : k - b] == core_t[b : k - a]:
                perm = _swap_permutation(n, (p, p + a), (p + k - b, p + k))
                return Reference(switch=Switch(perm))
    return None


def edit_path(s: str, t: str) -> list[str]:
    """Forward move sequence of the tie-broken minimum-cost alignment.

    Unit costs (copy free where characters match), backtracked from the end
    choosing the first admissible move in the order Copy, Modify, Delete,
    Insert. Deterministic: same inputs, same path.
    """
    n, m = len(s), len(t)
    dist = _distance_table(s, t)
    moves = []
    i, j = n, m
    while i or j:
        here = dist[i][j]
        if i and j and s[i - 1] == t[j - 1] and here == dist[i - 1][j - 1]:
            moves.append(COPY)
            i, j = i - 1, j - 1
        elif i and j and s[i - 1] != t[j - 1] and here == dist[i - 1][j - 1] + 1:
            moves.append(MODIFY)
            i, j = i - 1, j - 1
        elif i and here == dist[i - 1][j] + 1:
            moves.append(DELETE)
            i -= 1
        else:
            moves.append(INSERT)
            j -= 1
    moves.reverse()
    return moves


def _distance_table(s: str, t: str):
    n, m = len(s), len(t)
    dist = [[0] * (m + 1) for _ in range(n + 1)]
    for i in range(1, n + 1):
        dist[i][0] = i
    for j in range(1, m + 1):
        dist[0][j] = j
    for i in range(1, n + 1):
        row, prev = dist[i], dist[i - 1]
        ci = s[i - 1]
        for j in range(1, m + 1):
            sub = prev[j - 1] + (ci != t[j - 1])
            row[j] = min(sub, prev[j] + 1, row[j - 1] + 1)
    return dist


# Cluster states for the operation-count DP. A "cluster" is a maximal run of
# non-copy moves; its operation value is 1 if it produces any target
# character, otherwise one per deleted character. OUT = no open cluster;
# DEL = open cluster committed to stay delete-only (each delete charged);
# WAIT = open cluster charged once up front, promised to produce later;
# PAID = charged cluster that has produced (absorbs further moves free).
# LEAD/POST track the one grammar quirk: insertions before index 0 fold
# into a Modify of the first character, and insertions right after that
# character then merge into the same Modify for free.
_OUT, _DEL, _WAIT, _PAID, _LEAD, _POST = range(6)
_CLOSABLE = (_OUT, _DEL, _PAID, _LEAD, _POST)


def op_optimal_path(s: str, t: str) -> list[str]:
    """Minimum-cost alignment whose merged clusters give the fewest operations.

    All unit-cost minimum alignments of (s, t) are considered; among them
    this picks one minimizing the operation count of the merged clusters
    (ties broken deterministically by move preference Copy, Modify, Delete,
    Insert). The result realizes the same edit distance as ``edit_path`` but
    may trade copies for substitutions when that fuses adjacent clusters.
    """
    n, m = len(s), len(t)
    dist = _distance_table(s, t)
    inf = float("inf")
    # best[i][j][state] = fewest cluster operations reaching (i, j) in state
    best = [[[inf] * 6 for _ in range(m + 1)] for _ in range(n + 1)]
    back: dict[tuple[int, int, int], tuple[int, int, int, str]] = {}
    best[0][0][_OUT] = 0

    def relax(i, j, state, cost, pi, pj, pstate, move):
        if cost < best[i][j][state]:
            best[i][j][state] = cost
            back[(i, j, state)] = (pi, pj, pstate, move)

    for i in range(n + 1):
        for j in range(m + 1):
            here = dist[i][j]
            for state in range(6):
                cost = best[i][j][state]
                if cost == inf:
                    continue
                if (
                    i < n
                    and j < m
                    and s[i] == t[j]
                    and dist[i + 1][j + 1] == here
                    and state in _CLOSABLE
                ):
                    to = _POST if state == _LEAD else _OUT
                    relax(i + 1, j + 1, to, cost, i, j, state, COPY)
                if i < n and j < m and s[i] != t[j] and dist[i + 1][j + 1] == here + 1:
                    opened = state in (_OUT, _DEL, _POST)
                    # a substitution opens (or converts to) a paid cluster
                    relax(i + 1, j + 1, _PAID, cost + opened, i, j, state, MODIFY)
                if i < n and dist[i + 1][j] == here + 1:
                    if state in (_OUT, _POST):
                        relax(i + 1, j, _DEL, cost + 1, i, j, state, DELETE)
                        relax(i + 1, j, _WAIT, cost + 1, i, j, state, DELETE)
                    elif state == _DEL:
                        relax(i + 1, j, _DEL, cost + 1, i, j, state, DELETE)
                    elif state == _LEAD:
                        relax(i + 1, j, _PAID, cost, i, j, state, DELETE)
                    else:
                        relax(i + 1, j, state, cost, i, j, state, DELETE)
                if j < m and dist[i][j + 1] == here + 1:
                    if i == 0 and j == 0:
                        relax(i, j + 1, _LEAD, cost + 1, i, j, state, INSERT)
                    elif state in (_OUT, _DEL):
                        relax(i, j + 1, _PAID, cost + 1, i, j, state, INSERT)
                    elif state == _WAIT:
                        relax(i, j + 1, _PAID, cost, i, j, state, INSERT)
                    else:
                        # LEAD/POST/PAID absorb inserts into their cluster
                        relax(i, j + 1, state, cost, i, j, state, INSERT)
    final = min(_CLOSABLE, key=lambda st: best[n][m][st])
    moves = []
    i, j, state = n, m, final
    while (i, j) != (0, 0):
        pi, pj, pstate, move = back[(i, j, state)]
        moves.append(move)
        i, j, state = pi, pj, pstate
    moves.reverse()
    return moves


def _merge_path(moves: list[str], s: str, t: str) -> Reference:
    """Merge adjacent non-copy moves into the fewest operation items.

    Each maximal non-copy run covers a source span and produces a target
    segment; a run that both consumes and produces becomes one Modify, a
    produce-only run one Insert, a consume-only run one Delete group. An
    insertion before index 0 is folded into a Modify at position 0 so that
    positions stay inside the sentence.
    """
    clusters = []  # [start, end, produced-target-chars]
    i = j = 0
    current = None
    for move in moves:
        if move == COPY:
            current = None
            i += 1
            j += 1
            continue
        if current is None:
            current = [i, i, []]
            clusters.append(current)
        if move == MODIFY:
            current[2].append(t[j])
            i += 1
            j += 1
        elif move == DELETE:
            i += 1
        else:
            current[2].append(t[j])
            j += 1
        current[1] = i

    deletes: list[int] = []
    inserts: list[InsertItem] = []
    modifies: list[ModifyItem] = []
    for k, (start, end, produced) in enumerate(clusters):
        label = "".join(produced)
        if start == end:
            if start == 0:
                # leading insertion: fold into the first character's edit,
                # together with any insertion right after that character
                # (an insert anchor may not overlap the folded Modify)
                if k + 1 < len(clusters) and clusters[k + 1][:2] == [1, 1]:
                    label += s[0] + "".join(clusters.pop(k + 1)[2])
                else:
                    label += s[0]
                modifies.append(ModifyItem(pos=0, span=1, label=label))
            else:
                inserts.append(InsertItem(pos=start - 1, label=label))
        elif not label:
            deletes.extend(range(start, end))
        else:
            modifies.append(ModifyItem(pos=start, span=end - start, label=label))
    return Reference(
        deletes=tuple(deletes), inserts=tuple(inserts), modifies=tuple(modifies)
    )


def derive_operations(s: str, t: str) -> Reference:
    """Minimal operation labels turning ``s`` into ``t``.

    Empty reference when the sentences are equal; a single Switch when a
    two-block swap suffices; otherwise merged Levenshtein edits. Always
    satisfies ``apply_reference(s, result) == t``.
    """
    if s == t:
        return Reference()
    if not s or not t:
        raise EmptyInput("sentences must be non-empty")
    if Counter(s) == Counter(t):
        switched = try_switch_derivation(s, t)
        if switched is not None:
            return switched
    return _merge_path(op_optimal_path(s, t), s, t)


def normalize_reference(s: str, r: Reference) -> Reference:
    """Minimal-form reference realizing the same target as ``r``."""
    return derive_operations(s, apply_reference(s, r))
