"""Automatic sequences: substitutions, DFAOs, minimization and state-set traces.

A DFAO reads the base-k digits of n least significant first: A(s, w) is the
state reached from s reading the word w from right to left, so A(s, [n]_k)
for the written expansion [n]_k is the run on n.
"""
import json
import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from . import GnProveError

log = logging.getLogger(__name__)


class AutomatonError(GnProveError):
    pass


@dataclass(frozen=True)
class Substitution:
    alphabet: Tuple[str, ...]
    rules: Dict[str, str]
    seed: str

    def __post_init__(self):
        for a in self.alphabet:
            if a not in self.rules:
                raise AutomatonError(f"no rule for letter {a!r}")
        if not self.rules[self.seed].startswith(self.seed):
            raise AutomatonError(f"substitution is not prolongable on {self.seed!r}")


def thue_morse() -> Substitution:
    return Substitution(('a', 'b'), {'a': 'ab', 'b': 'ba'}, 'a')


def period_doubling() -> Substitution:
    return Substitution(('a', 'b'), {'a': 'ab', 'b': 'aa'}, 'a')


def substitution_prefix(s: Substitution, n: int) -> str:
    """First n letters of the fixed point s^oo(seed)."""
    word = s.seed
    if len(s.rules[s.seed]) == 1 and n > 1:
        raise AutomatonError("substitution does not grow from its seed")
    while len(word) < n:
        word = ''.join(s.rules[c] for c in word)
    return word[:n]


def digits(n: int, k: int = 2) -> List[int]:
    """Base-k digits of n, least significant first; empty for 0."""
    out = []
    while n:
        n, r = divmod(n, k)
        out.append(r)
    return out


def word_digits(word: str) -> List[int]:
    """Digits of a written word in reading order (rightmost first)."""
    return [int(c) for c in reversed(word)]


@dataclass(frozen=True)
class Dfao:
    """States 0..Q-1, delta[s][j] the successor on digit j, tau[s] the output."""

    k: int
    delta: Tuple[Tuple[int, ...], ...]
    tau: tuple
    initial: int = 0

    @property
    def size(self) -> int:
        return len(self.delta)

    def step(self, s: int, j: int) -> int:
        return self.delta[s][j]

    def read(self, s: int, word: str) -> int:
        """A(s, w): read the written word w from right to left."""
        for j in word_digits(word):
            s = self.delta[s][j]
        return s

    def run_state(self, n: int) -> int:
        s = self.initial
        for j in digits(n, self.k):
            s = self.delta[s][j]
        return s

    def __call__(self, n: int):
        return self.tau[self.run_state(n)]

    def reachable(self, start: Optional[int] = None):
        start = self.initial if start is None else start
        seen = {start}
        queue = deque([start])
        while queue:
            s = queue.popleft()
            for t in self.delta[s]:
                if t not in seen:
                    seen.add(t)
                    queue.append(t)
        return seen

    def is_leading_zero_stable(self) -> bool:
        """tau(A(s, 0)) = tau(s) on every reachable state."""
        return all(self.tau[self.delta[s][0]] == self.tau[s] for s in self.reachable())

    def with_tau(self, tau) -> 'Dfao':
        return Dfao(self.k, self.delta, tuple(tau), self.initial)


def dfao_run(d: Dfao, n: int):
    if n < 0:
        raise AutomatonError(f"negative index {n}")
    return d(n)


def dfao_from_kernel(states, transitions: dict, outputs: dict, initial, k: int = 2) -> Dfao:
    """Number the kernel states by breadth-first discovery and build the DFAO.

    transitions maps (state, digit) to a state of the kernel, outputs maps a
    state to its 0-th term.
    """
    states = set(states)
    index = {initial: 0}
    order = [initial]
    queue = deque([initial])
    delta = []
    while queue:
        s = queue.popleft()
        row = []
        for j in range(k):
            t = transitions.get((s, j))
            if t is None or t not in states:
                raise AutomatonError(f"kernel not closed: digit {j} leaves the state set")
            if t not in index:
                index[t] = len(order)
                order.append(t)
                queue.append(t)
            row.append(index[t])
        delta.append(tuple(row))
    return Dfao(k, tuple(delta), tuple(outputs[s] for s in order), 0)


def prefix_kernel(u, k: int = 2, compare: int = None, max_states: int = 4096):
    """Guess the k-kernel of a sequence from its prefix u.

    Kernel elements (u(k^d n + j))_n are identified by their first `compare`
    terms; returns (states, transitions, outputs, initial) for dfao_from_kernel.
    """
    u = tuple(u)
    compare = compare or max(1, len(u) // (k * k))
    start = u[:compare]
    seqs = {start: u}
    transitions = {}
    queue = deque([start])
    while queue:
        key = queue.popleft()
        seq = seqs[key]
        for j in range(k):
            sub = seq[j::k]
            if len(sub) < compare:
                raise AutomatonError(f"prefix too short to identify kernel elements at length {compare}")
            sk = sub[:compare]
            if sk not in seqs:
                if len(seqs) >= max_states:
                    raise AutomatonError(f"kernel exceeds {max_states} elements")
                seqs[sk] = sub
                queue.append(sk)
            transitions[(key, j)] = sk
    outputs = {key: key[0] for key in seqs}
    return set(seqs), transitions, outputs, start


def dfao_minimize(d: Dfao) -> Dfao:
    """Moore refinement on (tau, delta), then canonical breadth-first numbering."""
    reach = sorted(d.reachable())
    # initial classes by output, numbered by first occurrence
    cls = {}
    keys = {}
    for s in reach:
        cls[s] = keys.setdefault(('tau', d.tau[s]), len(keys))
    while True:
        sig = {}
        new = {}
        for s in reach:
            key = (cls[s],) + tuple(cls[t] for t in d.delta[s])
            new[s] = sig.setdefault(key, len(sig))
        if len(sig) == len(set(cls.values())):
            cls = new
            break
        cls = new
    rep = {}
    for s in reach:
        rep.setdefault(cls[s], s)
    transitions = {(c, j): cls[d.delta[s][j]] for c, s in rep.items() for j in range(d.k)}
    outputs = {c: d.tau[s] for c, s in rep.items()}
    out = dfao_from_kernel(set(rep), transitions, outputs, cls[d.initial], d.k)
    log.debug(f"minimized {d.size} states to {out.size}")
    return out


def dfao_isomorphism(a: Dfao, b: Dfao) -> Optional[Dict[int, int]]:
    """State map a -> b preserving initial state, transitions and outputs, or None."""
    if a.k != b.k:
        return None
    m = {a.initial: b.initial}
    queue = deque([a.initial])
    while queue:
        s = queue.popleft()
        if a.tau[s] != b.tau[m[s]]:
            return None
        for j in range(a.k):
            t, u = a.delta[s][j], b.delta[m[s]][j]
            if t in m:
                if m[t] != u:
                    return None
            else:
                m[t] = u
                queue.append(t)
    if len(set(m.values())) != len(m) or len(m) != len(b.reachable()):
        return None
    return m


# state-set traces

@dataclass(frozen=True)
class TraceEntry:
    length: int
    pointer: int
    states: frozenset


@dataclass
class SetTrace:
    """(A(i, 0^t), E_t) for t = start, start + stride, ... until a pair repeats.

    E_t = {A(i, w) : |w| = t, w != 0^t}. Entry `preperiod` is the first entry
    of the cycle, which has `period` entries.
    """

    start_state: int
    stride: int
    entries: List[TraceEntry] = field(default_factory=list)
    preperiod: int = 0
    period: int = 1

    def entry_for(self, length: int) -> TraceEntry:
        """The entry equal to (A(i, 0^length), E_length) for any length on the stride lattice."""
        first = self.entries[0].length
        if length < first or (length - first) % self.stride:
            raise AutomatonError(f"length {length} is not on the trace lattice")
        idx = (length - first) // self.stride
        if idx >= self.preperiod:
            idx = self.preperiod + (idx - self.preperiod) % self.period
        return self.entries[idx]

    @property
    def cycle(self) -> List[TraceEntry]:
        return self.entries[self.preperiod:self.preperiod + self.period]

    def lengths_to_check(self) -> List[int]:
        return [e.length for e in self.entries]


def _words(k: int, length: int):
    """All written words of the given length over digits 0..k-1."""
    if length == 0:
        yield ''
        return
    for n in range(k ** length):
        w = []
        for _ in range(length):
            n, r = divmod(n, k)
            w.append(str(r))
        yield ''.join(reversed(w))


def trace_step(d: Dfao, pointer: int, states, stride: int):
    """One application of the step map: lengths t -> t + stride."""
    zero = '0' * stride
    nxt = set()
    for w in _words(d.k, stride):
        for s in states:
            nxt.add(d.read(s, w))
        if w != zero:
            nxt.add(d.read(pointer, w))
    return d.read(pointer, zero), frozenset(nxt)


def state_sets_step(d: Dfao, stride: int = 2, start_length: int = None,
                    start_state: int = None, max_steps: int = 10000) -> SetTrace:
    """Iterate (pointer, E) with step `stride` from length `start_length` until a repeat."""
    if stride < 1:
        raise AutomatonError("stride must be at least 1")
    i = d.initial if start_state is None else start_state
    start_length = stride if start_length is None else start_length
    pointer, states = i, frozenset()
    for _ in range(start_length):
        pointer, states = trace_step(d, pointer, states, 1)
    trace = SetTrace(i, stride)
    seen = {}
    t = start_length
    for _ in range(max_steps):
        key = (pointer, states)
        if key in seen:
            trace.preperiod = seen[key]
            trace.period = len(trace.entries) - seen[key]
            log.debug(f"set trace from {i}: preperiod {trace.preperiod}, period {trace.period}")
            return trace
        seen[key] = len(trace.entries)
        trace.entries.append(TraceEntry(t, pointer, states))
        pointer, states = trace_step(d, pointer, states, stride)
        t += stride
    raise AutomatonError(f"no repeat within {max_steps} steps")


# table formats

def _grouped_rows(cells, groups: int):
    rows = -(-len(cells) // groups)
    out = []
    for r in range(rows):
        row = []
        for g in range(groups):
            idx = g * rows + r
            row.append(cells[idx] if idx < len(cells) else ' & ')
        out.append('& '.join(row) + '\\\\')
    return out


def _table(header_cell: str, cells, groups: int) -> str:
    spec = '| ' + '  |  '.join('c c' for _ in range(groups)) + '  |'
    header = ' & '.join([f'$n$ & {header_cell}'] * groups) + ' \\\\'
    lines = ['\\begin{longtable}{' + spec + '}', '\\hline', header, '\\hline']
    lines.extend(_grouped_rows(cells, groups))
    lines.extend(['\\hline', '\\end{longtable}'])
    return '\n'.join(lines)


def emit_tables(d: Dfao, fmt=str, groups: int = None, tau_groups: int = None) -> str:
    """Transition and output tables in column-major groups, one cell per state."""
    q = d.size
    groups = groups or (4 if q <= 20 else 5)
    tau_groups = tau_groups or (4 if q < 10 else 7)
    delta_cells = [f"{s} & [{', '.join(str(t) for t in d.delta[s])}]" for s in range(q)]
    tau_cells = [f"{s} & {fmt(d.tau[s])}" for s in range(q)]
    return (_table('$\\Lambda(n)$', delta_cells, groups) + '\n\n'
            + _table('$\\tau(n)$', tau_cells, tau_groups))


def _table_bodies(text: str):
    bodies = []
    for block in text.split('\\begin{longtable}')[1:]:
        lines = [ln.strip() for ln in block.split('\\end{longtable}')[0].split('\n')]
        rows = [ln for ln in lines[1:] if ln and not ln.startswith('\\') and not ln.startswith('$n$')]
        bodies.append(rows)
    return bodies


def _cells(row: str):
    parts = row.rstrip('\\').split('&')
    pairs = []
    for n, value in zip(parts[0::2], parts[1::2]):
        if n.strip():
            pairs.append((int(n), value.strip()))
    return pairs


def parse_tables(text: str, parse=lambda s: s, k: int = 2) -> Dfao:
    """Inverse of emit_tables; output cells are read with `parse`."""
    bodies = _table_bodies(text)
    if len(bodies) != 2:
        raise AutomatonError(f"expected a transition and an output table, found {len(bodies)}")
    delta = {}
    for row in bodies[0]:
        for n, value in _cells(row):
            delta[n] = tuple(int(v) for v in value.strip('[]').split(','))
    tau = {}
    for row in bodies[1]:
        for n, value in _cells(row):
            tau[n] = parse(value)
    q = len(delta)
    if sorted(delta) != list(range(q)) or sorted(tau) != list(range(q)):
        raise AutomatonError("tables do not number the states 0..Q-1")
    if any(len(row) != k for row in delta.values()):
        raise AutomatonError(f"transition rows must have {k} entries")
    return Dfao(k, tuple(delta[s] for s in range(q)), tuple(tau[s] for s in range(q)), 0)


def dump_structured(d: Dfao, fmt=str) -> str:
    return json.dumps({
        'base': d.k,
        'initial': d.initial,
        'states': d.size,
        'transitions': [list(row) for row in d.delta],
        'outputs': [fmt(t) for t in d.tau],
    }, indent=2)


def load_structured(text: str, parse=lambda s: s) -> Dfao:
    data = json.loads(text)
    try:
        delta = tuple(tuple(row) for row in data['transitions'])
        tau = tuple(parse(t) for t in data['outputs'])
        d = Dfao(int(data['base']), delta, tau, int(data.get('initial', 0)))
    except (KeyError, TypeError, ValueError) as e:
        raise AutomatonError(f"malformed automaton dump: {e}") from e
    if d.size != data.get('states', d.size) or len(tau) != d.size:
        raise AutomatonError("state count mismatch in automaton dump")
    return d
