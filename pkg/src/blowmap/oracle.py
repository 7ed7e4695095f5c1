"""Brute-force reducer: the independent arbiter for minimal position.

The production normalizer applies crossing-decreasing moves innermost-first
in one deterministic order.  The oracle explores *all* removal orders
breadth-first (bounded) and reports the minimum crossing count reached, so
fixture tests can check that the deterministic order loses nothing.
"""

from __future__ import annotations

from collections import deque

from .isotopy import (_apply_full_move, _apply_half_move, _find_moves,
                      crossing_count)


def oracle_min_crossings(sk, a_owner, b_owner, cap=4000):
    """Minimum of |a x b| over all sequences of bigon removals."""
    best = crossing_count(sk, a_owner, b_owner)
    seen = set()
    queue = deque([sk.copy()])
    states = 0
    while queue:
        cur = queue.popleft()
        key = cur.canonical_text()
        if key in seen:
            continue
        seen.add(key)
        states += 1
        if states > cap:
            raise RuntimeError("oracle state cap exceeded")
        best = min(best, crossing_count(cur, a_owner, b_owner))
        moves = _find_moves(cur, a_owner, b_owner,
                            movable={a_owner, b_owner})
        for i in range(len(moves)):
            nxt = cur.copy()
            mv = _find_moves(nxt, a_owner, b_owner,
                             movable={a_owner, b_owner})[i]
            if mv.kind == "full":
                _apply_full_move(nxt, mv)
            else:
                _apply_half_move(nxt, mv)
            queue.append(nxt)
    return best


def oracle_isotopic_arcs(sk, a_owner, b_owner):
    """Arc isotopy verdict through the exhaustive reducer."""
    from .isotopy import _endpoints

    if set(_endpoints(sk, a_owner)) != set(_endpoints(sk, b_owner)):
        return False
    if oracle_min_crossings(sk, a_owner, b_owner) != 0:
        return False
    # reduce to zero crossings along some order, then apply the
    # complementary-component criterion
    queue = deque([sk.copy()])
    seen = set()
    while queue:
        cur = queue.popleft()
        key = cur.canonical_text()
        if key in seen:
            continue
        seen.add(key)
        if crossing_count(cur, a_owner, b_owner) == 0:
            _, _, region_data = cur.view_walks({a_owner, b_owner})
            return any(not r["free_marked"] for r in region_data)
        moves = _find_moves(cur, a_owner, b_owner,
                            movable={a_owner, b_owner})
        for i in range(len(moves)):
            nxt = cur.copy()
            mv = _find_moves(nxt, a_owner, b_owner,
                             movable={a_owner, b_owner})[i]
            if mv.kind == "full":
                _apply_full_move(nxt, mv)
            else:
                _apply_half_move(nxt, mv)
            queue.append(nxt)
    return False
