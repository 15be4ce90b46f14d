"""Radio energy models and per-node energy accounting.

Two radio models are supported: a two-regime model that switches from a d^2
to a d^4 amplifier term at a crossover distance, and a simple model whose
amplifier term depends only on distance (optionally scaled by message size).
Each node owns an :class:`EnergyLedger` that tracks consumption by category
and preserves the conservation identity ``initial == residual + consumed``.
"""

from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass

log = logging.getLogger(__name__)


class RadioModelKind(enum.Enum):
    TWO_REGIME = "two_regime"
    SIMPLE = "simple"


class ChargeCategory(enum.Enum):
    TX = "tx"
    RX = "rx"
    IDLE = "idle"
    SENSE = "sense"
    MOVE = "move"


@dataclass(frozen=True)
class RadioModel:
    """Energy constants for one radio model; immutable and shareable.

    For the two-regime model a ``d0 <= 0`` is replaced by the conventional
    crossover ``sqrt(eps_fs / eps_mp)``.
    """

    kind: RadioModelKind = RadioModelKind.SIMPLE
    e_elec: float = 50e-9          # J/bit, transceiver electronics
    eps_fs: float = 10e-12         # J/bit/m^2, short-range amplifier
    eps_mp: float = 0.0013e-12     # J/bit/m^4, long-range amplifier
    d0: float = 0.0                # m, regime crossover
    e_trans: float = 0.02          # J/bit, simple-model transmit constant
    e_amp: float = 0.01            # J/m^2 (or J/bit/m^2 with amp_per_bit)
    e_recv: float = 0.01           # J/bit, simple-model receive constant
    amp_per_bit: bool = False

    def __post_init__(self) -> None:
        for name in ("e_elec", "eps_fs", "eps_mp", "e_trans", "e_amp", "e_recv"):
            if getattr(self, name) < 0:
                raise ValueError(f"radio constant {name} must be >= 0")
        if self.kind is RadioModelKind.TWO_REGIME and self.d0 <= 0:
            if self.eps_mp <= 0:
                raise ValueError("two-regime model needs eps_mp > 0 to derive d0")
            object.__setattr__(self, "d0", math.sqrt(self.eps_fs / self.eps_mp))


def tx_energy(model: RadioModel, bits: int, d: float) -> float:
    """Energy to transmit ``bits`` over distance ``d`` meters.

    Two-regime: bits * (e_elec + eps_fs * d^2) below d0, the d^4 branch at
    d >= d0. Simple: e_trans * bits plus one amplifier term e_amp * d^2,
    charged per message unless ``amp_per_bit`` is set.
    """
    if bits < 0 or d < 0:
        raise ValueError(f"tx_energy requires bits >= 0 and d >= 0, got {bits}, {d}")
    if model.kind is RadioModelKind.TWO_REGIME:
        if d < model.d0:
            return bits * model.e_elec + bits * model.eps_fs * d * d
        return bits * model.e_elec + bits * model.eps_mp * d ** 4
    amp = model.e_amp * d * d
    if model.amp_per_bit:
        amp *= bits
    elif bits == 0:
        amp = 0.0
    return model.e_trans * bits + amp


def rx_energy(model: RadioModel, bits: int) -> float:
    """Energy to receive ``bits``; linear in message size for both models."""
    if bits < 0:
        raise ValueError(f"rx_energy requires bits >= 0, got {bits}")
    if model.kind is RadioModelKind.TWO_REGIME:
        return bits * model.e_elec
    return model.e_recv * bits


class EnergyLedger:
    """Per-node battery book-keeping with one counter per charge category.

    A node dies when a charge would drive its residual to (or below) zero;
    the draw is clamped so that ``residual`` never goes negative and the
    conservation identity holds after every charge. Charges against a dead
    ledger are ignored (logged once per ledger).
    """

    __slots__ = (
        "initial", "consumed_tx", "consumed_rx", "consumed_idle",
        "consumed_sense", "consumed_move", "alive", "_warned_dead",
    )

    def __init__(self, initial: float) -> None:
        if initial < 0:
            raise ValueError(f"initial energy must be >= 0, got {initial}")
        self.initial = initial
        self.consumed_tx = 0.0
        self.consumed_rx = 0.0
        self.consumed_idle = 0.0
        self.consumed_sense = 0.0
        self.consumed_move = 0.0
        self.alive = initial > 0
        self._warned_dead = False

    @property
    def total_consumed(self) -> float:
        return (self.consumed_tx + self.consumed_rx + self.consumed_idle
                + self.consumed_sense + self.consumed_move)

    @property
    def residual(self) -> float:
        return self.initial - self.total_consumed

    def kill(self) -> None:
        """Freeze the ledger after an external failure; residual may stay > 0."""
        self.alive = False

    def charge(self, category: ChargeCategory, amount: float) -> bool:
        """Draw ``amount`` joules from the given category; returns liveness."""
        if amount < 0:
            raise ValueError(f"charge amount must be >= 0, got {amount}")
        if not self.alive:
            if not self._warned_dead:
                log.debug("charge of %.3g J (%s) against a dead ledger ignored",
                          amount, category.value)
                self._warned_dead = True
            return False
        drawn = amount
        residual = self.residual
        if drawn >= residual:
            drawn = residual
            self.alive = False
        attr = "consumed_" + category.value
        setattr(self, attr, getattr(self, attr) + drawn)
        return self.alive


def zone_energy_ratio(zone_residual: float, cluster_residual: float) -> float:
    """Share of a cluster's residual energy held by one of its zones.

    Zero when the whole cluster is drained. The crisis decision made on this
    ratio is strict: exactly the threshold is not a crisis.
    """
    if zone_residual < 0 or cluster_residual < zone_residual:
        raise ValueError(
            f"need 0 <= zone_residual <= cluster_residual, got "
            f"{zone_residual}, {cluster_residual}"
        )
    if cluster_residual == 0:
        return 0.0
    return zone_residual / cluster_residual


# Strict crisis threshold on a zone's residual-energy share.
CRISIS_RATIO = 0.1
