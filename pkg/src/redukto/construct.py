"""The two transformations.

(A) Grammar pipeline: a Greibach-normal-form grammar G is recoded so that
each terminal carries the number of the rule that produced it; the recoded
language is deterministic context-free and is recognized by a synthesized
deterministic contextual-deletion scanner; interpreting the tagged symbols as
auxiliary symbols and mapping them back to their terminals yields an
automaton whose h-proper language is L(G) and whose input language is empty.

The cited general transformation of deterministic context-free languages
into deterministic monotone contextual-deletion automata is out of scope
here; the synthesizer replaces it with an oracle-guided search whose result
is certified only up to the validated length, as stated on its report:
candidate deletion rules are harvested from derivation words, filtered by
membership preservation at their leftmost matches, assembled into a
leftmost-match scanner, and validated against the derivation oracle.

(B) Shrinking transform: any automaton with a morphism is turned into a
shrinking automaton that first guesses, right to left and one symbol per
cycle, a working-symbol replacement for every input symbol (the lexical
analysis; input symbols standing for themselves are replaced by fresh hatted
copies), and then simulates the source on the replaced tape.  The weight of
an input symbol is its number of morphism preimages plus one, so every
replacement and every simulated rewrite strictly decreases the tape weight.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from typing import Optional

from .catalog import all_window_contents
from .checks import check_cycle_soundness, check_monotone
from .engine import DEFAULT_LIMITS, Limits, run_deterministic
from .languages import (
    compare_word_sets,
    enumerate_input_by_reduction,
    enumerate_language,
    LanguageQuery,
)
from .model import (
    LEFT_SENTINEL,
    RIGHT_SENTINEL,
    SL,
    AutomatonSpec,
    ClassFlags,
    GnfGrammar,
    GnfRule,
    PreconditionError,
    ReduktoError,
    Word,
    accept,
    mvr,
    reject,
    render_word,
    restart,
    sl,
)

C, D = LEFT_SENTINEL, RIGHT_SENTINEL


class SynthesisError(ReduktoError):
    def __init__(self, message: str, report: "SynthesisReport"):
        super().__init__(message)
        self.report = report


@dataclass(frozen=True)
class DerivationAlphabet:
    """One tagged terminal per grammar rule, mapped back by the morphism."""

    symbols: tuple[str, ...]
    morphism: dict[str, str]          # tagged symbol -> original terminal
    rule_numbers: dict[str, int]      # tagged symbol -> rule number


def rule_token(number: int, terminal: str) -> str:
    return "(%d,%s)" % (number, terminal)


def derivation_encode(grammar: GnfGrammar) -> tuple[GnfGrammar, DerivationAlphabet]:
    """Recode a GNF grammar over rule-tagged terminals.

    The i-th rule A -> a alpha becomes A -> (i,a) alpha; a tagged word spells
    out a leftmost derivation, and erasing the tags recovers the derived
    terminal word.
    """
    symbols = []
    morphism = {}
    numbers = {}
    new_rules = []
    for i, rule in enumerate(grammar.rules, start=1):
        tok = rule_token(i, rule.head)
        symbols.append(tok)
        morphism[tok] = rule.head
        numbers[tok] = i
        new_rules.append(GnfRule(rule.lhs, tok, rule.tail))
    tagged = GnfGrammar(
        name=grammar.name + "_tagged",
        nonterminals=grammar.nonterminals,
        terminals=frozenset(symbols),
        start=grammar.start,
        rules=tuple(new_rules),
    )
    return tagged, DerivationAlphabet(tuple(symbols), morphism, numbers)


def derivation_check(tagged: GnfGrammar, word: Word) -> bool:
    """Whether a tagged word spells a leftmost derivation of the grammar.

    Replays the derivation on a prediction stack: each tagged symbol must
    expand the topmost nonterminal with its own rule; the tail is pushed so
    that the leftmost nonterminal stays on top.  Accepts iff the input is
    exhausted together with the stack.
    """
    by_head = {rule.head: rule for rule in tagged.rules}
    stack = [tagged.start]
    for tok in word:
        rule = by_head.get(tok)
        if rule is None or not stack:
            return False
        expected = stack.pop()
        if expected != rule.lhs:
            return False
        stack.extend(reversed(rule.tail))
    return not stack


def enumerate_grammar_words(grammar: GnfGrammar, max_len: int) -> list[Word]:
    """All words of the grammar up to max_len, via breadth-first leftmost
    derivation (each step emits one terminal, so a sentential form with m
    emitted terminals and s predicted nonterminals derives only words of
    length at least m + s)."""
    out = []
    frontier: list[tuple[Word, tuple[str, ...]]] = [((), (grammar.start,))]
    while frontier:
        nxt = []
        for emitted, stack in frontier:
            if not stack:
                out.append(emitted)
                continue
            if len(emitted) + len(stack) > max_len:
                continue
            top, rest = stack[0], stack[1:]
            for _, rule in grammar.rules_for(top):
                nxt.append((emitted + (rule.head,), rule.tail + rest))
        frontier = nxt
    return sorted(set(out), key=lambda w: (len(w), w))


@dataclass
class SynthesisReport:
    window_requested: int
    window_used: int
    train_length: int
    validate_length: int
    rules: list[tuple[Word, Word]] = field(default_factory=list)
    verdict: str = "failed"             # "validated" | "failed"
    counterexamples: list[Word] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def describe(self) -> str:
        lines = [
            "window requested %d, used %d" % (self.window_requested, self.window_used),
            "trained on words up to length %d, validated up to length %d"
            % (self.train_length, self.validate_length),
            "verdict: %s" % self.verdict,
        ]
        for u, v in self.rules:
            lines.append("rule %s -> %s" % (render_word(u), render_word(v)))
        for note in self.notes:
            lines.append("note: %s" % note)
        for w in self.counterexamples[:5]:
            lines.append("counterexample: %s" % render_word(w))
        return "\n".join(lines)


def _contextual_deletions(u: Word) -> set[Word]:
    """All nonempty-or-total deletions of at most two contiguous blocks of
    non-sentinel cells from u."""
    cells = [i for i, tok in enumerate(u) if tok not in (C, D)]
    if not cells:
        return set()
    lo, hi = cells[0], cells[-1] + 1
    out = set()
    spans = [
        (i, j) for i in range(lo, hi) for j in range(i + 1, hi + 1)
    ]
    for i, j in spans:
        out.add(u[:i] + u[j:])
        for i2, j2 in spans:
            if i2 > j:
                out.add(u[:i] + u[j:i2] + u[j2:])
    return out


def _attempt_synthesis(
    tagged: GnfGrammar,
    k: int,
    train_len: int,
    validate_len: int,
    limits: Limits,
) -> tuple[Optional[AutomatonSpec], SynthesisReport]:
    report = SynthesisReport(k, k, train_len, validate_len)
    alphabet = sorted(tagged.terminals)
    training = enumerate_grammar_words(tagged, train_len)
    member = lambda w: derivation_check(tagged, w)

    # Harvest: every contextual deletion of a window of a member word whose
    # global result is again a member.
    candidates: dict[Word, set[Word]] = {}
    for word in training:
        tape = (C,) + word + (D,)
        for p in range(len(tape)):
            u = tape[p : p + k]
            if len(u) < min(k, len(tape) - p):
                continue
            for v in _contextual_deletions(u):
                result = tape[:p] + v + tape[p + len(u) :]
                if member(result[1:-1]):
                    candidates.setdefault(u, set()).add(v)

    # Filter: a rule survives only if applying it at its leftmost match
    # preserves the membership status of every sample word.  The sample
    # extends the training members with all short words and with single-edit
    # corruptions of the members, so that rules which would repair an invalid
    # word into the language are rejected here rather than at validation.
    sample: dict[Word, bool] = {w: True for w in training}
    for w in itertools.chain.from_iterable(
        itertools.product(alphabet, repeat=n) for n in range(min(6, train_len) + 1)
    ):
        sample.setdefault(w, member(w))
    for word in training:
        for i in range(len(word) + 1):
            for tok in alphabet:
                grown = word[:i] + (tok,) + word[i:]
                sample.setdefault(grown, member(grown))
        for i in range(len(word)):
            shrunk = word[:i] + word[i + 1 :]
            sample.setdefault(shrunk, member(shrunk))
            for tok in alphabet:
                if tok != word[i]:
                    swapped = word[:i] + (tok,) + word[i + 1 :]
                    sample.setdefault(swapped, member(swapped))

    killed: set[tuple[Word, Word]] = set()

    def refilter(words) -> None:
        for word in words:
            status = sample[word]
            tape = (C,) + word + (D,)
            seen: set[Word] = set()
            for p in range(len(tape)):
                u = tape[p : p + k]
                if u in seen or u not in candidates:
                    continue
                seen.add(u)
                for v in candidates[u]:
                    if (u, v) in killed:
                        continue
                    result = tape[:p] + v + tape[p + len(u) :]
                    if member(result[1:-1]) != status:
                        killed.add((u, v))

    refilter(list(sample))

    def assemble() -> tuple[dict[Word, Word], AutomatonSpec]:
        kept: dict[Word, Word] = {}
        for u in sorted(candidates):
            survivors = [v for v in candidates[u] if (u, v) not in killed]
            if survivors:
                kept[u] = min(survivors, key=lambda w: (len(w), w))
        return kept, _assemble_scanner(tagged, k, kept, member)

    # Validate and refine: on a language mismatch, the reduction chain of the
    # offending word is added to the filter sample (it pins down the exact
    # rule application that changed a membership status), the rule set is
    # reassembled and validation runs again.  Every round retires at least
    # one rule, so the loop terminates; residual failures are reported and
    # the caller may retry with a wider window.
    expected = enumerate_grammar_words(tagged, validate_len)
    small = min(6, validate_len)
    expected_small = [w for w in expected if len(w) <= small]
    for _ in range(1 + len(candidates)):
        kept, spec = assemble()
        report.rules = sorted(kept.items())
        cmp_full = compare_word_sets(
            enumerate_input_by_reduction(
                spec, validate_len, seed_len=min(k, validate_len), limits=limits
            ),
            expected,
            validate_len,
        )
        if cmp_full.equal:
            brute = enumerate_language(spec, LanguageQuery("input", small, limits))
            cmp_full = compare_word_sets(brute, expected_small, small)
        if not cmp_full.equal:
            witness = cmp_full.counterexample
            chain = {witness}
            trace = run_deterministic(spec, witness, limits)
            chain.update(v for _, v in trace.reductions())
            fresh = [w for w in sorted(chain) if w not in sample]
            if not fresh:
                report.counterexamples.append(witness)
                report.notes.append("language mismatch: %s" % cmp_full.describe())
                return None, report
            for w in fresh:
                sample[w] = member(w)
            refilter(fresh)
            continue
        mono = check_monotone(spec, min(8, validate_len), limits)
        if not mono.holds:
            if mono.counterexample:
                report.counterexamples.append(mono.counterexample.word)
            report.notes.append("monotonicity check: %s" % mono.verdict)
            return None, report
        sound = check_cycle_soundness(spec, min(8, validate_len), limits)
        if not sound.holds:
            if sound.counterexample:
                report.counterexamples.append(sound.counterexample.word)
            report.notes.append("cycle-soundness check: %s" % sound.verdict)
            return None, report
        report.verdict = "validated"
        return spec, report
    report.notes.append("refinement loop exhausted")
    return None, report


def _assemble_scanner(
    tagged: GnfGrammar,
    k: int,
    rules: dict[Word, Word],
    member,
) -> AutomatonSpec:
    """Deterministic scanner: move right, rewrite at the leftmost window
    matching a rule, then restart; whole short words are accepted or rejected
    directly from the initial window."""
    alphabet = sorted(tagged.terminals)
    table: dict = {}
    for u in all_window_contents(k, alphabet):
        if u in rules:
            table[("q0", u)] = [sl("qr", rules[u])]
        elif u[0] == C and u[-1] == D:
            table[("q0", u)] = [accept()] if member(u[1:-1]) else [reject()]
        elif u[-1] == D:
            table[("q0", u)] = [reject()]
        else:
            table[("q0", u)] = [mvr("q0")]
        table[("qr", u)] = [restart()]
    return AutomatonSpec(
        name="scan_" + tagged.name,
        states=frozenset({"q0", "qr"}),
        initial="q0",
        window=k,
        input_alphabet=frozenset(alphabet),
        work_alphabet=frozenset(alphabet),
        table=table,
        flags=ClassFlags(direction="R", form="CL", aux="none", deterministic=True),
    )


def synthesize_reduction_system(
    tagged: GnfGrammar,
    k: int,
    train_len: int = 10,
    validate_len: int = 12,
    window_cap: Optional[int] = None,
    limits: Limits = DEFAULT_LIMITS,
) -> tuple[AutomatonSpec, SynthesisReport]:
    """Synthesize a deterministic contextual-deletion scanner for the tagged
    language, retrying with a wider window up to ``window_cap`` (no retries
    when the cap is omitted).  Raises SynthesisError, carrying the last
    report and its counterexamples, when no window up to the cap validates.
    """
    if k < 2:
        raise PreconditionError("window size must be at least 2")
    cap = k if window_cap is None else max(k, window_cap)
    last_report = None
    for width in range(k, cap + 1):
        spec, report = _attempt_synthesis(tagged, width, train_len, validate_len, limits)
        report.window_requested = k
        if spec is not None:
            return spec, report
        last_report = report
    raise SynthesisError(
        "no rule set validates with window up to %d" % cap, last_report
    )


def build_hrrwwc(
    grammar: GnfGrammar,
    k: int = 3,
    train_len: int = 10,
    validate_len: int = 12,
    window_cap: Optional[int] = 8,
    limits: Limits = DEFAULT_LIMITS,
) -> tuple[AutomatonSpec, SynthesisReport]:
    """Grammar pipeline: tag the rules, synthesize the scanner over the
    tagged alphabet, then attach the terminals as input symbols that are
    rejected on sight, with the tag-erasing morphism.

    The result is deterministic with contextual rewrites only; its h-proper
    language equals the grammar language and its input language is empty, up
    to the validated length.
    """
    tagged, dalpha = derivation_encode(grammar)
    scanner, report = synthesize_reduction_system(
        tagged, k, train_len, validate_len, window_cap, limits
    )
    sigma = sorted(grammar.terminals)
    table = dict(scanner.table)
    for u in all_window_contents(scanner.window, sigma):
        if any(tok in grammar.terminals for tok in u) and ("q0", u) not in table:
            table[("q0", u)] = [reject()]
    morphism = dict(dalpha.morphism)
    for tok in sigma:
        morphism[tok] = tok
    spec = AutomatonSpec(
        name="g2c_" + grammar.name,
        states=scanner.states,
        initial=scanner.initial,
        window=scanner.window,
        input_alphabet=frozenset(sigma),
        work_alphabet=frozenset(sigma) | scanner.work_alphabet,
        table=table,
        flags=ClassFlags(direction="R", form="CL", aux="WW", deterministic=True),
        morphism=morphism,
    )
    return spec, report


def dga(spec: AutomatonSpec, symbol: str) -> int:
    """Degree of lexical ambiguity: number of working symbols mapping to the
    given input symbol (at least 1, since the morphism fixes input symbols)."""
    if spec.morphism is None:
        raise PreconditionError("automaton carries no morphism")
    if symbol not in spec.input_alphabet:
        raise PreconditionError("%r is not an input symbol" % symbol)
    return sum(1 for tok, image in spec.morphism.items() if image == symbol)


def hat_token(symbol: str) -> str:
    return symbol + "^"


def _hat_word(word: Word, sigma: frozenset[str]) -> Word:
    return tuple(hat_token(tok) if tok in sigma else tok for tok in word)


def to_shrinking(spec: AutomatonSpec) -> tuple[AutomatonSpec, dict[str, int]]:
    """Build the shrinking automaton whose input language is the h-proper
    language of the source.

    Phase one replaces input symbols right to left, one per cycle, each by a
    nondeterministically chosen non-input preimage (with fresh hatted copies
    standing in for the input symbols themselves).  Phase two, entered when
    the symbol right of the left border is no longer an input symbol,
    simulates the source on the replaced tape.  The returned weight function
    gives every input symbol its preimage count plus one and every other
    symbol weight one, which makes every cycle weight-decreasing.
    """
    if spec.morphism is None:
        raise PreconditionError("to_shrinking requires a morphism")
    sigma = spec.input_alphabet
    gamma = spec.work_alphabet
    hats = {tok: hat_token(tok) for tok in sorted(sigma)}
    for hat in hats.values():
        if hat in gamma:
            raise PreconditionError("hatted symbol %r collides with the working alphabet" % hat)
    gamma_s = frozenset(gamma | set(hats.values()))
    morphism_s = dict(spec.morphism)
    for tok, hat in hats.items():
        morphism_s[hat] = tok
    weights = {tok: dga(spec, tok) + 1 for tok in sorted(sigma)}
    for tok in sorted(gamma_s - sigma):
        weights[tok] = 1

    choices = {
        a: sorted(tok for tok, image in morphism_s.items() if image == a and tok not in sigma)
        for a in sigma
    }
    k = spec.window
    sim = {q: "sim_" + q for q in sorted(spec.states)}
    states = {"q0", "p1", "qr"} | set(sim.values())
    table: dict = {}

    def phase1_rewrites(state_key, window):
        """One instruction per replacement choice for the rightmost input
        symbol visible in a window that is known to close the inspection."""
        idx = max(i for i, tok in enumerate(window) if tok in sigma)
        out = []
        for d in choices[window[idx]]:
            out.append(sl("qr", window[:idx] + (d,) + window[idx + 1 :]))
        table[(state_key, window)] = out

    for window in all_window_contents(k, sorted(gamma_s)):
        has_sigma = any(tok in sigma for tok in window)
        if window[0] == C:
            if len(window) > 1 and window[1] in sigma:
                if D in window:
                    phase1_rewrites("q0", window)
                else:
                    table[("q0", window)] = [mvr("p1")]
            # Other initial windows belong to the simulation and are filled
            # below from the source table.
        else:
            if D in window:
                if has_sigma:
                    phase1_rewrites("p1", window)
            elif window[0] in sigma and not any(tok in sigma for tok in window[1:]):
                phase1_rewrites("p1", window)
            elif any(tok in sigma for tok in window[1:]):
                table[("p1", window)] = [mvr("p1")]
        table[("qr", window)] = [restart()]

    for (q, window), instrs in spec.table.items():
        hatted = _hat_word(window, sigma)
        key_state = "q0" if q == spec.initial and window and window[0] == C else sim[q]
        renamed = []
        for ins in instrs:
            if ins.kind == SL:
                renamed.append(sl(sim[ins.state], _hat_word(ins.target, sigma)))
            elif ins.kind in ("MVR", "MVL"):
                renamed.append(ins._replace(state=sim[ins.state]))
            else:
                renamed.append(ins)
        table.setdefault((key_state, hatted), []).extend(renamed)
        if key_state != sim[q]:
            table.setdefault((sim[q], hatted), []).extend(renamed)

    deterministic = spec.flags.deterministic and all(
        len(choices[a]) <= 1 for a in sigma
    )
    out = AutomatonSpec(
        name=spec.name + "_shrunk",
        states=frozenset(states),
        initial="q0",
        window=k,
        input_alphabet=sigma,
        work_alphabet=gamma_s,
        table=table,
        flags=ClassFlags(
            direction=spec.flags.direction,
            form="SL",
            aux="WW",
            deterministic=deterministic,
            mr_degree=spec.flags.mr_degree,
            shrinking=True,
        ),
        morphism=morphism_s,
        weights=weights,
    )
    return out, weights
