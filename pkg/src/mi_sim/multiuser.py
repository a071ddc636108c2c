"""One-to-many downlink: per-receiver coil selection plus nullspace precoding.

The swarm head serves two or three receivers at once.  Each receiver keeps
only its best coil (largest coupling-row norm); the transmitter then sends
stream i along a unit vector orthogonal to every other stream's selected
coupling row, so each receiver's coil hears only its own symbol.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .strategies import LinkBudget, _capacity_from_snr

LEAKAGE_TOL = 1e-10


@dataclass(frozen=True)
class UserChannel:
    """Coupling of one receiver: row q maps transmit coils to its coil q."""

    receiver_id: int
    m_matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.m_matrix, dtype=complex)
        if m.shape != (3, 3):
            raise ValueError("user channel must have exactly 3 coupling rows")
        if not np.all(np.isfinite(m.view(float))):
            raise ValueError("user channel entries must be finite")
        object.__setattr__(self, "m_matrix", m)


@dataclass(frozen=True)
class PrecodeSet:
    """Unit precoders per stream with equal per-stream power.

    `stream_rows[i]` is the selected coupling row stream i is aimed at;
    `degenerate` flags streams whose own row is nearly inside the span of
    the other rows, leaving a condition-driven tiny effective channel.
    """

    precoders: np.ndarray
    powers: np.ndarray
    stream_rows: np.ndarray
    degenerate: tuple = ()


def select_receive_coil(uc: UserChannel) -> int:
    """Index of the coupling row with the largest norm, lowest on ties."""
    return int(np.argmax(np.linalg.norm(uc.m_matrix, axis=1)))


def nullspace_precoders(selected_rows, total_power: float = 1.0) -> PrecodeSet:
    """Zero-forcing directions from the smallest right-singular vectors.

    For stream i, stack every other stream's selected row (at most 2x3, so
    a nonempty nullspace always exists) and take the right-singular vector
    of the smallest singular value; by construction it is orthogonal to all
    the other rows.
    """
    rows = np.asarray(selected_rows, dtype=complex)
    if rows.ndim != 2 or rows.shape[1] != 3 or rows.shape[0] not in (2, 3):
        raise ValueError("need 2 or 3 selected coupling rows")
    n = rows.shape[0]
    precoders = np.empty((n, 3), dtype=complex)
    degenerate = []
    for i in range(n):
        others = np.delete(rows, i, axis=0)
        _, _, vh = np.linalg.svd(others)
        u = vh[-1].conj()
        precoders[i] = u / np.linalg.norm(u)
        own = np.linalg.norm(rows[i])
        if own == 0.0 or abs(rows[i] @ precoders[i]) < 1e-6 * own:
            degenerate.append(i)
    return PrecodeSet(
        precoders=precoders,
        powers=np.full(n, total_power / n),
        stream_rows=rows,
        degenerate=tuple(degenerate),
    )


def cross_leakage(ps: PrecodeSet) -> np.ndarray:
    """|m_j . u_i| / ||m_j|| for j != i; zero-forcing drives these to ~0."""
    n = ps.precoders.shape[0]
    out = np.zeros((n, n))
    norms = np.linalg.norm(ps.stream_rows, axis=1)
    for i in range(n):
        for j in range(n):
            if i != j and norms[j] > 0:
                out[j, i] = abs(ps.stream_rows[j] @ ps.precoders[i]) / norms[j]
    return out


@dataclass(frozen=True)
class MultiuserRates:
    """Per-stream and per-user spectral efficiencies for one draw."""

    stream_capacities: np.ndarray
    stream_users: tuple
    user_capacities: dict
    precode: PrecodeSet


def multiuser_rates(users, lb: LinkBudget) -> MultiuserRates:
    """Serve 2 or 3 receivers with selection + nullspace precoding.

    Three receivers get one stream each; two receivers split the three
    streams 2 + 1, the pair going to the receiver with the better best-row.
    Stream powers are equal at P_t/3 (P_t/n for two rows), and each
    stream's rate follows from its effective scalar coupling m_i . u_i.
    """
    users = list(users)
    if len(users) not in (2, 3):
        raise ValueError("multiuser downlink serves 2 or 3 receivers")
    rows = []
    stream_users = []
    if len(users) == 3:
        for uc in users:
            rows.append(uc.m_matrix[select_receive_coil(uc)])
            stream_users.append(uc.receiver_id)
    else:
        norms = [
            np.sort(np.linalg.norm(uc.m_matrix, axis=1))[::-1] for uc in users
        ]
        lead = 0 if norms[0][0] >= norms[1][0] else 1
        other = 1 - lead
        order = np.argsort(-np.linalg.norm(users[lead].m_matrix, axis=1))
        for q in order[:2]:
            rows.append(users[lead].m_matrix[q])
            stream_users.append(users[lead].receiver_id)
        rows.append(users[other].m_matrix[select_receive_coil(users[other])])
        stream_users.append(users[other].receiver_id)

    ps = nullspace_precoders(np.asarray(rows), total_power=lb.transmit_power)
    effective = np.array([ps.stream_rows[i] @ ps.precoders[i]
                          for i in range(len(rows))])
    snr = lb.snr_gain * np.abs(effective) ** 2 * ps.powers
    stream_caps = _capacity_from_snr(snr)
    user_caps: dict = {}
    for uid, cap in zip(stream_users, stream_caps):
        user_caps[uid] = user_caps.get(uid, 0.0) + float(cap)
    return MultiuserRates(
        stream_capacities=stream_caps,
        stream_users=tuple(stream_users),
        user_capacities=user_caps,
        precode=ps,
    )
