"""Per-node TSCH link layer.

The schedule is a static slotframe realizing the three cell kinds of a
minimal scheduling function: one shared broadcast cell for enhanced beacons
(EBs) and, per child, a dedicated unicast cell in each direction between the
child and the root. The physical channel for a cell comes from the hopping
sequence indexed by (ASN + channel offset).

Joining is EB-driven: an unjoined node listens every slot (scanning with
channel offset 0, which lines up with the broadcast cell), and the first EB
it decodes makes the sender its time source. Synchronization is maintained
by a keepalive rule: going longer than keepalive_timeout without hearing the
time source desynchronizes the node, which then has to re-join via EB.

Unicast data is acknowledged in the same slot; a missing ACK retries the
head frame in the next owned cell until max_retries is exhausted.
"""

from collections import deque
from dataclasses import dataclass, field
from enum import Enum

# 2.4 GHz IEEE 802.15.4 channel page 0, ascending order.
DEFAULT_FHS_CHANNELS: tuple[int, ...] = tuple(range(11, 27))

MIN_CHANNEL = 11
MAX_CHANNEL = 26


@dataclass(frozen=True)
class FhsTable:
    channels: tuple[int, ...] = DEFAULT_FHS_CHANNELS

    def validate(self) -> None:
        if not self.channels:
            raise ValueError("mac.fhs_channels must be non-empty")
        for ch in self.channels:
            if not MIN_CHANNEL <= ch <= MAX_CHANNEL:
                raise ValueError(f"mac.fhs_channels entry {ch} outside 11..26")


def hop_channel(fhs: FhsTable, asn: int, channel_offset: int) -> int:
    """Physical channel for a cell: FHS[(ASN + offset) mod sequence length]."""
    return fhs.channels[(asn + channel_offset) % len(fhs.channels)]


class CellKind(Enum):
    MINIMAL = "minimal"
    AUTONOMOUS = "autonomous"
    NEGOTIATED = "negotiated"


@dataclass(frozen=True)
class Cell:
    timeslot: int
    channel_offset: int
    kind: CellKind
    tx_node: int | None = None  # None = shared broadcast cell
    rx_node: int | None = None  # None = broadcast


@dataclass(frozen=True)
class Slotframe:
    length: int
    cells: tuple[Cell, ...]

    def validate(self) -> None:
        if self.length <= 0:
            raise ValueError("slotframe length must be > 0")
        seen: set[tuple[int, int]] = set()
        for cell in self.cells:
            if cell.timeslot >= self.length:
                raise ValueError(f"cell timeslot {cell.timeslot} >= length {self.length}")
            key = (cell.timeslot, cell.channel_offset)
            if key in seen:
                raise ValueError(f"two cells share (timeslot, offset) {key}")
            seen.add(key)

    def cell_at(self, timeslot: int) -> Cell | None:
        for cell in self.cells:
            if cell.timeslot == timeslot:
                return cell
        return None


def star_slotframe(root_id: int, child_ids: list[int]) -> Slotframe:
    """Static schedule for a single-hop star.

    Slot 0 is the shared minimal cell (broadcast EBs, offset 0); each child
    then owns an autonomous uplink cell and a downlink cell from the root,
    both on offset 1. One transmitter per (timeslot, offset) by construction.
    """
    cells = [Cell(0, 0, CellKind.MINIMAL)]
    ts = 1
    for child in child_ids:
        cells.append(Cell(ts, 1, CellKind.AUTONOMOUS, tx_node=child, rx_node=root_id))
        cells.append(Cell(ts + 1, 1, CellKind.AUTONOMOUS, tx_node=root_id, rx_node=child))
        ts += 2
    frame = Slotframe(length=ts, cells=tuple(cells))
    frame.validate()
    return frame


@dataclass(frozen=True)
class MacParams:
    eb_period_s: float = 4.0
    keepalive_timeout_s: float = 10.0
    max_retries: int = 8
    queue_capacity: int = 16

    def validate(self) -> None:
        if self.eb_period_s <= 0:
            raise ValueError("mac.eb_period_s must be > 0")
        if self.keepalive_timeout_s <= self.eb_period_s:
            raise ValueError("mac.keepalive_timeout_s must be > mac.eb_period_s")
        if self.max_retries < 0:
            raise ValueError("mac.max_retries must be >= 0")
        if self.queue_capacity < 1:
            raise ValueError("mac.queue_capacity must be >= 1")


class FrameKind(Enum):
    EB = "eb"
    DATA = "data"
    ACK = "ack"


@dataclass(frozen=True)
class Frame:
    kind: FrameKind
    src: int
    dst: int | None = None  # None = broadcast
    seq: int = 0            # data sequence number, or the seq being ACKed
    payload_size: int = 0


@dataclass(slots=True)
class DataFrame:
    seq: int
    payload_size: int
    enqueue_asn: int
    retries: int = 0


@dataclass(slots=True)
class MacState:
    node_id: int
    is_root: bool = False
    joined: bool = False
    time_source: int | None = None
    last_heard_asn: int = -1
    first_join_asn: int | None = None
    last_eb_asn: int | None = None  # None = EB due at the next minimal cell
    tx_queue: deque = field(default_factory=deque)
    next_seq: int = 0
    # App-layer duplicate filter at the receiving side: highest sequence
    # delivered per origin. FIFO senders retransmit in order, so a max works.
    delivered_high: dict = field(default_factory=dict)


def root_mac_state(node_id: int) -> MacState:
    """The coordinator is born joined: it constructs the network itself."""
    return MacState(node_id=node_id, is_root=True, joined=True,
                    first_join_asn=0, last_heard_asn=0)


class SlotAction(Enum):
    TRANSMIT_EB = "transmit_eb"
    TRANSMIT_DATA = "transmit_data"
    LISTEN = "listen"
    SLEEP = "sleep"


def eb_due(state: MacState, asn: int, eb_period_slots: int) -> bool:
    if state.last_eb_asn is None:
        return True
    return asn - state.last_eb_asn >= eb_period_slots


def slot_action(state: MacState, slotframe: Slotframe, asn: int,
                eb_period_slots: int) -> SlotAction:
    """What this node does in the current slot.

    Unjoined nodes never transmit: they scan (listen) in every slot. Joined
    nodes beacon on the minimal cell when their EB timer has elapsed, send
    queued data in their own unicast cells, listen in cells addressed to
    them, and sleep otherwise.
    """
    if not state.joined:
        return SlotAction.LISTEN
    cell = slotframe.cell_at(asn % slotframe.length)
    if cell is None:
        return SlotAction.SLEEP
    if cell.kind is CellKind.MINIMAL:
        if eb_due(state, asn, eb_period_slots):
            return SlotAction.TRANSMIT_EB
        return SlotAction.LISTEN
    if cell.tx_node == state.node_id:
        if state.tx_queue:
            return SlotAction.TRANSMIT_DATA
        return SlotAction.SLEEP
    if cell.rx_node == state.node_id:
        return SlotAction.LISTEN
    return SlotAction.SLEEP


@dataclass(slots=True)
class RxResult:
    joined_now: bool = False
    delivery: tuple | None = None       # (origin, seq, payload_size), first copy only
    duplicate: bool = False
    ack_frame: Frame | None = None      # to send back in the same slot
    acked: DataFrame | None = None      # head frame retired by a received ACK


def on_frame_received(state: MacState, frame: Frame, from_id: int, asn: int) -> RxResult:
    """Apply a successfully decoded frame to the MAC state."""
    out = RxResult()
    if frame.kind is FrameKind.EB:
        if not state.joined:
            state.joined = True
            state.time_source = from_id
            state.last_heard_asn = asn
            if state.first_join_asn is None:
                state.first_join_asn = asn
            out.joined_now = True
            return out
        if from_id == state.time_source:
            state.last_heard_asn = asn
        return out
    if from_id == state.time_source:
        state.last_heard_asn = asn
    if frame.kind is FrameKind.DATA and frame.dst == state.node_id:
        high = state.delivered_high.get(frame.src, -1)
        if frame.seq > high:
            state.delivered_high[frame.src] = frame.seq
            out.delivery = (frame.src, frame.seq, frame.payload_size)
        else:
            out.duplicate = True
        # Always acknowledge, duplicates included, so the sender stops.
        out.ack_frame = Frame(FrameKind.ACK, src=state.node_id, dst=frame.src, seq=frame.seq)
        return out
    if frame.kind is FrameKind.ACK and frame.dst == state.node_id:
        if state.tx_queue and state.tx_queue[0].seq == frame.seq:
            out.acked = state.tx_queue.popleft()
        return out
    return out


def check_connectivity(state: MacState, asn: int, keepalive_slots: int) -> bool:
    """True while synchronized; applies the desync transition when stale.

    Desynchronizing clears the join and time source (the node must re-join
    via EB) but keeps first_join_asn, which marks the first join only.
    """
    if not state.joined:
        return False
    if state.time_source is None:
        return True  # coordinator, never expires
    if asn - state.last_heard_asn > keepalive_slots:
        state.joined = False
        state.time_source = None
        return False
    return True


def enqueue_app_frame(state: MacState, payload_size: int, asn: int, capacity: int) -> bool:
    """Queue an application frame; unjoined nodes queue too (frames wait)."""
    if len(state.tx_queue) >= capacity:
        return False
    state.tx_queue.append(DataFrame(seq=state.next_seq, payload_size=payload_size,
                                    enqueue_asn=asn))
    state.next_seq += 1
    return True


def note_ack_missing(state: MacState, max_retries: int) -> DataFrame | None:
    """Record a transmission attempt that got no ACK.

    Returns the head frame if the retry budget is now exhausted and it was
    dropped, else None (the frame stays queued for the next owned cell).
    """
    if not state.tx_queue:
        return None
    head = state.tx_queue[0]
    head.retries += 1
    if head.retries > max_retries:
        return state.tx_queue.popleft()
    return None
