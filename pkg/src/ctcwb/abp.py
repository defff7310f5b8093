"""An alternating-bit protocol over lossy channels, modelled so that the
maximal-step semantics keeps it live.

Under maximal progress a component whose only pending actions are
restricted and currently unmatched blocks every step of the whole system,
so the model is arranged so that each agent always has a move:

* the channels are always receptive — sending never blocks, a message
  arriving at a full channel pushes the oldest one out (the channels are
  lossy anyway) — and can silently drop a message instead of delivering
  it, which keeps them mobile while their output has no taker;
* agents waiting to receive on an idle channel (the replier between
  messages, an empty channel, the timer) have a silent self-loop, a tick,
  so they can let a step pass;
* the externally visible states offer nothing but their visible action,
  which forces the accept of a new item at the sender and at the replier
  into one simultaneous step, and likewise the two deliveries — exactly
  the behaviour of the two-port buffer the protocol should implement.

The sender stamps each message with the current bit, retransmits on
timeout, and ignores acknowledgements carrying the stale bit; the replier
acknowledges every message and ignores messages carrying the stale bit.
Delivery at the two ends is synchronised by an internal handshake (the
`done` channel) fired once the sender has the matching acknowledgement,
after which both agents flip their bit.

The specification the protocol should match weakly is the two-port
buffer: accept simultaneously at both ends, then deliver simultaneously
at both ends.
"""

from __future__ import annotations

from dataclasses import dataclass

from .terms import (
    Const,
    DefEnv,
    MultiPrefix,
    Par,
    Prefix,
    Process,
    Restrict,
    Step,
    Sum,
    TAU,
    coname,
    name,
)

INTERNAL = (
    "send0",
    "send1",
    "trans0",
    "trans1",
    "reply0",
    "reply1",
    "ack0",
    "ack1",
    "time",
    "timeout",
    "done",
)


def _sum(*terms: Process) -> Process:
    out = terms[0]
    for t in terms[1:]:
        out = Sum(out, t)
    return out


def _par(*terms: Process) -> Process:
    out = terms[0]
    for t in terms[1:]:
        out = Par(out, t)
    return out


def _pre(a, body: Process) -> Process:
    return Prefix(a, body)


@dataclass(frozen=True)
class AbpModel:
    capacity: int
    env: DefEnv
    system: Process  # the protocol, internal names restricted
    spec: Process  # the two-port buffer


def _channel_states(
    env: DefEnv,
    prefix: str,
    inn: str,
    out: str,
    capacity: int,
) -> str:
    """Defines the states of one lossy bounded-capacity FIFO channel and
    returns the name of its empty state.

    `inn`/`out` are the base names of the input and output ports; a state
    holds the queued bits oldest-first. Receiving is always enabled; at
    capacity the incoming message displaces the oldest queued one. A
    queued message may be lost, or duplicated while the duplicate still
    fits within capacity."""

    def cname(queue: tuple[int, ...]) -> str:
        return prefix + ("E" if not queue else "".join(map(str, queue)))

    queues = [()]
    frontier = [()]
    while frontier:
        nxt = []
        for q in frontier:
            for b in (0, 1):
                q2 = (q + (b,))[-capacity:] if len(q) >= capacity else q + (b,)
                if len(q) < capacity and q2 not in queues:
                    queues.append(q2)
                    nxt.append(q2)
        frontier = nxt

    for q in queues:
        me = Const(cname(q))
        branches = []
        if not q:
            branches.append(_pre(TAU, me))  # idle tick
        else:
            rest = Const(cname(q[1:]))
            branches.append(_pre(coname(f"{out}{q[0]}"), rest))  # deliver
            branches.append(_pre(TAU, rest))  # lose the oldest message
            if len(q) < capacity:
                # duplicate the oldest message (only while it fits)
                branches.append(_pre(TAU, Const(cname((q[0],) + q))))
        for b in (0, 1):
            q2 = (q[1:] + (b,)) if len(q) >= capacity else q + (b,)
            branches.append(_pre(name(f"{inn}{b}"), Const(cname(q2))))
        env.define(cname(q), _sum(*branches))
    return cname(())


def build_abp(capacity: int = 1) -> AbpModel:
    if capacity < 1:
        raise ValueError("channel capacity must be at least 1")
    env = DefEnv()

    for b in (0, 1):
        nb = 1 - b
        # sender: accept, transmit until acknowledged, then deliver
        env.define(f"AcceptS{b}", _pre(name("acceptS"), Const(f"Send{b}")))
        env.define(f"Send{b}", _pre(coname(f"send{b}"), Const(f"SetT{b}")))
        env.define(f"SetT{b}", _pre(coname("time"), Const(f"Sending{b}")))
        env.define(
            f"Sending{b}",
            _sum(
                _pre(name("timeout"), Const(f"Send{b}")),
                _pre(name(f"ack{b}"), Const(f"ClearT{b}")),
                _pre(name(f"ack{nb}"), Const(f"Sending{b}")),
            ),
        )
        env.define(f"ClearT{b}", _pre(name("timeout"), Const(f"Sync{b}")))
        env.define(f"Sync{b}", _pre(coname("done"), Const(f"DeliverS{b}")))
        env.define(f"DeliverS{b}", _pre(coname("deliverS"), Const(f"AcceptS{nb}")))

        # replier: accept, wait for the message, acknowledge until the
        # sender confirms, then deliver
        env.define(f"AcceptR{b}", _pre(name("acceptR"), Const(f"Wait{b}")))
        env.define(
            f"Wait{b}",
            _sum(
                _pre(TAU, Const(f"Wait{b}")),
                _pre(name(f"trans{b}"), Const(f"Reply{b}")),
                _pre(name(f"trans{nb}"), Const(f"Wait{b}")),
            ),
        )
        env.define(f"Reply{b}", _pre(coname(f"reply{b}"), Const(f"WaitDone{b}")))
        env.define(
            f"WaitDone{b}",
            _sum(
                # the tick lets the ack channel spend its move on
                # delivering the acknowledgement instead of receiving a
                # retransmitted one
                _pre(TAU, Const(f"WaitDone{b}")),
                _pre(coname(f"reply{b}"), Const(f"WaitDone{b}")),
                _pre(name("done"), Const(f"DeliverR{b}")),
            ),
        )
        env.define(f"DeliverR{b}", _pre(coname("deliverR"), Const(f"AcceptR{nb}")))

    # timer: set by the sender, fires or is cleared via timeout
    env.define(
        "TimerOff",
        _sum(_pre(TAU, Const("TimerOff")), _pre(name("time"), Const("TimerOn"))),
    )
    env.define(
        "TimerOn",
        _sum(_pre(TAU, Const("TimerOn")), _pre(coname("timeout"), Const("TimerOff"))),
    )

    trans_empty = _channel_states(env, "Trans", "send", "trans", capacity)
    ack_empty = _channel_states(env, "Ack", "reply", "ack", capacity)

    system = Restrict(
        _par(
            Const("AcceptS0"),
            Const(trans_empty),
            Const(ack_empty),
            Const("AcceptR0"),
            Const("TimerOff"),
        ),
        frozenset(INTERNAL),
    )

    env.define(
        "Buff",
        MultiPrefix(Step.of([name("acceptS"), name("acceptR")]), Const("BuffFull")),
    )
    env.define(
        "BuffFull",
        MultiPrefix(Step.of([coname("deliverS"), coname("deliverR")]), Const("Buff")),
    )
    spec = Const("Buff")

    env.validate([system, spec])
    return AbpModel(capacity, env, system, spec)
