"""Pure-Python successor kernel; same interface as the compiled ``_kernel``."""


class NetKernel:
    """Enabledness and firing over markings encoded as tuples of ints.

    ``pre``, ``inhib`` and ``delta`` hold one list of ``(place_index, value)``
    pairs per transition index.  An inhibitor value ``v`` disables the
    transition once the place holds ``v`` or more tokens.
    """

    def __init__(self, n_places, pre, inhib, delta):
        self.n_places = n_places
        self.n_transitions = len(pre)
        self._pre = [tuple(r) for r in pre]
        self._inhib = [tuple(r) for r in inhib]
        self._delta = [tuple(r) for r in delta]

    def is_enabled(self, marking, t):
        for p, w in self._pre[t]:
            if marking[p] < w:
                return False
        for p, v in self._inhib[t]:
            if marking[p] >= v:
                return False
        return True

    def enabled(self, marking):
        return [t for t in range(self.n_transitions) if self.is_enabled(marking, t)]

    def fire(self, marking, t):
        m = list(marking)
        for p, d in self._delta[t]:
            m[p] += d
        return tuple(m)

    def successors(self, marking):
        out = []
        for t in range(self.n_transitions):
            if self.is_enabled(marking, t):
                out.append((t, self.fire(marking, t)))
        return out
