"""Exact operational semantics: configurations, the six step types, cycles
and tails, deterministic runs, nondeterministic membership search, and the
cycle-rewriting relation.

A configuration holds the whole tape including both sentinels; ``pos`` is the
index of the leftmost window cell, so the restarting configuration of a word
w has tape ``(LEFT,) + w + (RIGHT,)``, state q0 and pos 0, and the window
content is ``tape[pos : pos + k]``.

Cycle discipline.  In "strict" mode (the default) every phase that ends in a
restart must contain between 1 and mr-degree rewrite steps, and a phase that
halts by accepting must contain none; a rejecting halt after a rewrite is an
aborted cycle and is always admitted.  "permissive" mode drops the
requirements and expresses the raw model.  Searches prune branches that
violate the discipline; deterministic runs report them as an invalid-cycle
outcome.

A missing table entry halts the run; this is reported as a reject flagged
"stuck", distinct from an explicit reject step.

Searches are reentrant and side-effect free apart from per-call memo tables;
deciding distinct words in parallel is safe.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, NamedTuple, Optional

from .model import (
    ACCEPT,
    LEFT_SENTINEL,
    MVL,
    MVR,
    REJECT,
    RESTART,
    RIGHT_SENTINEL,
    SL,
    AutomatonSpec,
    Instruction,
    PreconditionError,
    SymbolError,
    Word,
    render_word,
    word_weight,
)


class Configuration(NamedTuple):
    tape: Word          # includes both sentinels
    state: str
    pos: int            # index of the leftmost window cell, 0-based
    rewrites: int       # rewrite steps performed in the current phase


class Limits(NamedTuple):
    max_steps_per_cycle: int = 10_000
    max_configs: int = 1_000_000
    max_total_cycles: int = 100_000


DEFAULT_LIMITS = Limits()

STRICT = "strict"
PERMISSIVE = "permissive"

# Trace outcomes.
OUT_ACCEPT = "accept"
OUT_REJECT = "reject"
OUT_DIVERGES = "diverges"
OUT_LIMIT = "limit-exceeded"
OUT_INVALID = "invalid-cycle"

Step = tuple[Configuration, Instruction]


@dataclass
class Trace:
    steps: list[Step]
    outcome: str
    flag: Optional[str] = None

    def cycle_count(self) -> int:
        return sum(1 for _, ins in self.steps if ins.kind == RESTART)

    def reductions(self) -> list[tuple[Word, Word]]:
        """The sequence of cycle rewritings u => v along this trace."""
        out = []
        current = None
        for config, ins in self.steps:
            if current is None:
                current = strip_sentinels(config.tape)
            if ins.kind == RESTART:
                after = strip_sentinels(config.tape)
                out.append((current, after))
                current = after
        return out


@dataclass(frozen=True)
class CycleRewrite:
    from_word: Word
    to_word: Word
    steps: tuple[Step, ...]


@dataclass
class Decision:
    verdict: str                    # member | non-member | resource-exceeded
    witness: Optional[Trace] = None
    configs_explored: int = 0

    @property
    def is_member(self) -> bool:
        return self.verdict == "member"


def restarting_configuration(spec: AutomatonSpec, word: Word) -> Configuration:
    return Configuration((LEFT_SENTINEL,) + tuple(word) + (RIGHT_SENTINEL,), spec.initial, 0, 0)


def strip_sentinels(tape: Word) -> Word:
    return tape[1:-1]


def window_of(spec: AutomatonSpec, config: Configuration) -> Word:
    return config.tape[config.pos : config.pos + spec.window]


def right_distance(config: Configuration) -> int:
    """Cells from the window start through the right sentinel, inclusive."""
    return len(config.tape) - config.pos


def successors(spec: AutomatonSpec, config: Configuration):
    """All (instruction, successor) pairs offered at ``config``.

    Accept and Reject yield a successor of None (terminal markers).  An
    absent table key yields the empty list; implicit rejection is not
    assumed.  Side conditions: MVR is not offered when the window shows the
    right sentinel alone, MVL is not offered when the window touches the
    left sentinel.  A rewrite splices the target over the window content and
    moves the window left by the length difference, floored at zero.
    """
    tape, state, pos, rewrites = config
    window = tape[pos : pos + spec.window]
    out = []
    for ins in spec.table.get((state, window), ()):
        kind = ins.kind
        if kind == MVR:
            if window == (RIGHT_SENTINEL,):
                continue
            out.append((ins, Configuration(tape, ins.state, pos + 1, rewrites)))
        elif kind == MVL:
            if pos == 0:
                continue
            out.append((ins, Configuration(tape, ins.state, pos - 1, rewrites)))
        elif kind == SL:
            new_tape = tape[:pos] + ins.target + tape[pos + len(window):]
            new_pos = max(0, pos - (len(window) - len(ins.target)))
            out.append((ins, Configuration(new_tape, ins.state, new_pos, rewrites + 1)))
        elif kind == RESTART:
            out.append((ins, Configuration(tape, spec.initial, 0, 0)))
        else:  # Accept / Reject
            out.append((ins, None))
    return out


def _discipline_violation(spec, discipline, ins, config) -> Optional[str]:
    # A rejecting halt after a rewrite is treated as an aborted cycle, not as
    # a rewriting tail: deterministic multi-rewrite automata must delete
    # eagerly and can discover a mismatch only afterwards, and a mid-cycle
    # reject contributes nothing to any language.
    if discipline != STRICT:
        return None
    if ins.kind == SL and config.rewrites >= spec.flags.mr_degree:
        return "more than %d rewrite steps in a cycle" % spec.flags.mr_degree
    if ins.kind == RESTART and config.rewrites == 0:
        return "cycle without a rewrite step"
    if ins.kind == ACCEPT and config.rewrites > 0:
        return "rewrite step in a tail"
    return None


def run_deterministic(
    spec: AutomatonSpec,
    word: Word,
    limits: Limits = DEFAULT_LIMITS,
    discipline: str = STRICT,
) -> Trace:
    """Run a deterministic automaton from the restarting configuration of
    ``word`` until it halts, loops, gets stuck, breaks the cycle discipline,
    or exhausts the limits."""
    if not spec.flags.deterministic:
        raise PreconditionError("run_deterministic requires a deterministic automaton")
    config = restarting_configuration(spec, tuple(word))
    steps: list[Step] = []
    seen: set[Configuration] = set()
    cycle_steps = 0
    cycles = 0
    total = 0
    while True:
        if config in seen:
            return Trace(steps, OUT_DIVERGES)
        seen.add(config)
        total += 1
        cycle_steps += 1
        if total > limits.max_configs or cycle_steps > limits.max_steps_per_cycle:
            return Trace(steps, OUT_LIMIT)
        succ = successors(spec, config)
        if not succ:
            return Trace(steps, OUT_REJECT, flag="stuck")
        if len(succ) > 1:
            raise PreconditionError(
                "nondeterministic choice at (%s, %s)"
                % (config.state, render_word(window_of(spec, config)))
            )
        ins, nxt = succ[0]
        bad = _discipline_violation(spec, discipline, ins, config)
        steps.append((config, ins))
        if bad is not None:
            return Trace(steps, OUT_INVALID, flag=bad)
        if nxt is None:
            return Trace(steps, OUT_ACCEPT if ins.kind == ACCEPT else OUT_REJECT)
        if ins.kind == RESTART:
            cycles += 1
            if cycles > limits.max_total_cycles:
                return Trace(steps, OUT_LIMIT)
            seen.clear()
            cycle_steps = 0
        config = nxt


class _Budget:
    __slots__ = ("left",)

    def __init__(self, amount: int):
        self.left = amount

    def spend(self) -> bool:
        self.left -= 1
        return self.left >= 0


class _Exhausted(Exception):
    pass


@dataclass
class _PhaseResult:
    tail_accept: Optional[list[Step]]   # steps of an accepting tail, if any
    cycles: list[tuple[Word, list[Step]]]  # (successor word, cycle steps)
    truncated: bool = False


def _explore_phase(
    spec: AutomatonSpec,
    word: Word,
    limits: Limits,
    discipline: str,
    budget: _Budget,
    want_all_cycles: bool = True,
) -> _PhaseResult:
    """Depth-first exploration of one phase (from a restarting configuration
    up to the next restart or halt) over all nondeterministic branches.

    Branches that break the cycle discipline are pruned.  Loops within the
    phase are pruned by a visited set over full configurations.  Paths are
    reconstructed through parent pointers.
    """
    start = restarting_configuration(spec, word)
    parents: dict[Configuration, Optional[Step]] = {start: None}
    stack = [start]
    visited = {start}
    result = _PhaseResult(tail_accept=None, cycles=[])
    steps_budget = limits.max_steps_per_cycle
    expanded = 0

    def path_to(config: Configuration, final: Step) -> list[Step]:
        chain = [final]
        cur = config
        while True:
            step = parents[cur]
            if step is None:
                break
            chain.append(step)
            cur = step[0]
        chain.reverse()
        return chain

    while stack:
        config = stack.pop()
        expanded += 1
        if expanded > steps_budget:
            result.truncated = True
            break
        if not budget.spend():
            raise _Exhausted()
        for ins, nxt in successors(spec, config):
            if _discipline_violation(spec, discipline, ins, config) is not None:
                continue
            if nxt is None:
                if ins.kind == ACCEPT and result.tail_accept is None:
                    result.tail_accept = path_to(config, (config, ins))
                continue
            if ins.kind == RESTART:
                result.cycles.append(
                    (strip_sentinels(nxt.tape), path_to(config, (config, ins)))
                )
                continue
            if nxt in visited:
                continue
            visited.add(nxt)
            parents[nxt] = (config, ins)
            stack.append(nxt)
    if want_all_cycles:
        # Deterministic order for reproducible witnesses and reports.
        result.cycles.sort(key=lambda item: item[0])
    return result


def decide_basic_membership(
    spec: AutomatonSpec,
    word: Word,
    limits: Limits = DEFAULT_LIMITS,
    discipline: str = STRICT,
    memoize: bool = True,
    memo: Optional[dict] = None,
) -> Decision:
    """Decide whether some computation from the restarting configuration of
    ``word`` accepts.

    With ``memoize`` the search keeps a table keyed on restarting tape words;
    this is sound because behavior from a restarting configuration depends
    only on the tape.  Words whose exploration is already on the stack
    contribute no acceptance (an accepting computation never needs to repeat
    a restarting word).  ``memoize=False`` re-explores every restarting word
    and serves as the brute-force cross-check.
    """
    word = tuple(word)
    budget = _Budget(limits.max_configs)
    table = memo if memo is not None else {}
    IN_PROGRESS = "in-progress"

    def search(w: Word, depth: int) -> tuple[bool, Optional[list[Step]]]:
        if depth > limits.max_total_cycles:
            raise _Exhausted()
        if memoize:
            cached = table.get(w)
            if cached is IN_PROGRESS:
                return False, None
            if cached is not None:
                return cached
            table[w] = IN_PROGRESS
        phase = _explore_phase(spec, w, limits, discipline, budget)
        if phase.truncated:
            raise _Exhausted()
        verdict: tuple[bool, Optional[list[Step]]] = (False, None)
        if phase.tail_accept is not None:
            verdict = (True, phase.tail_accept)
        else:
            for to_word, steps in phase.cycles:
                sub_ok, sub_steps = search(to_word, depth + 1)
                if sub_ok:
                    verdict = (True, steps + sub_steps)
                    break
        if memoize:
            table[w] = verdict
        return verdict

    try:
        ok, steps = search(word, 0)
    except _Exhausted:
        return Decision("resource-exceeded", configs_explored=limits.max_configs - budget.left)
    except RecursionError:
        return Decision("resource-exceeded", configs_explored=limits.max_configs - budget.left)
    explored = limits.max_configs - budget.left
    if ok:
        return Decision("member", Trace(steps, OUT_ACCEPT), explored)
    return Decision("non-member", None, explored)


def decide_input_membership(
    spec: AutomatonSpec,
    word: Word,
    limits: Limits = DEFAULT_LIMITS,
    discipline: str = STRICT,
    memoize: bool = True,
    memo: Optional[dict] = None,
) -> Decision:
    """decide_basic_membership restricted to words over the input alphabet."""
    word = tuple(word)
    for tok in word:
        if tok not in spec.input_alphabet:
            raise SymbolError("symbol %r is not an input symbol" % tok)
    return decide_basic_membership(spec, word, limits, discipline, memoize, memo)


def cycle_rewrites(
    spec: AutomatonSpec,
    word: Word,
    limits: Limits = DEFAULT_LIMITS,
    discipline: str = STRICT,
) -> list[CycleRewrite]:
    """All v with word => v in one cycle, each with a witness step sequence.

    For non-shrinking automata every returned word is strictly shorter than
    the argument; shrinking automata may preserve length and the weight
    function carries the progress argument instead.
    """
    word = tuple(word)
    budget = _Budget(limits.max_configs)
    phase = _explore_phase(spec, word, limits, discipline, budget)
    out = []
    seen = set()
    for to_word, steps in phase.cycles:
        if to_word in seen:
            continue
        seen.add(to_word)
        if not spec.flags.shrinking:
            assert len(to_word) < len(word), "cycle did not shorten the tape"
        elif spec.weights is not None:
            assert word_weight(spec.weights, to_word) < word_weight(spec.weights, word), (
                "cycle did not decrease the tape weight"
            )
        out.append(CycleRewrite(word, to_word, tuple(steps)))
    return out


def replay_trace(spec: AutomatonSpec, trace: Trace) -> bool:
    """Check that every step of a trace is offered by the step relation and
    that consecutive configurations chain together."""
    steps = trace.steps
    for i, (config, ins) in enumerate(steps):
        offered = successors(spec, config)
        match = [nxt for cand, nxt in offered if cand == ins]
        if not match:
            return False
        nxt = match[0]
        if i + 1 < len(steps) and nxt is not None and steps[i + 1][0] != nxt:
            return False
    return True


def trace_tapes(trace: Trace) -> list[Word]:
    """Distinct tape contents (sentinels stripped) visited along a trace, in
    first-visit order, including the final tape if the trace halts."""
    seen = []
    have = set()
    for config, _ in trace.steps:
        w = strip_sentinels(config.tape)
        if w not in have:
            have.add(w)
            seen.append(w)
    return seen
