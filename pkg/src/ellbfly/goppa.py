"""MDS elliptic Goppa codes [d, d/2, d/2+1] with O(d log d) encoding.

The code is the image of the involution-invariant subspace of L(<t>) under
evaluation at a coset Q + <t> with 2dQ != 0.  That subspace has the basis

    l_0 = 1,   l_l = v_l - v_{-l}   for 1 <= l <= d/2 - 1,

so messages of length d/2 embed into v-coordinates as an odd vector
(n_0 = m_0, n_{d/2} = 0, n_l = m_l, n_{d-l} = -m_l), which a base change and
one butterfly evaluation turn into the codeword.  Checking a received word is
one butterfly interpolation followed by the linear parity conditions
n_{d/2} = 0 and n_l + n_{-l} = 0.
"""

from __future__ import annotations

from typing import List, Optional, Sequence

from .bases import u_to_v, v_to_u
from .butterfly import butterfly_evaluate, butterfly_interpolate
from .tower import Tower


class GoppaCode:
    """The [d, d/2, d/2+1] code attached to a tower over (E, t, Q)."""

    def __init__(self, tower: Tower):
        if tower.lift is not None:
            raise ValueError("the evaluation coset Q must be rational")
        self.tower = tower
        self.K = tower.base_field
        self.d = tower.d
        self.dp = self.d // 2
        top = tower.levels[tower.delta]
        # 2dQ != 0: Q not in the 2d-torsion translates that break injectivity
        E = top.E
        if E.mul(2 * self.d, top.b) is None:
            raise ValueError("need 2dQ != 0 for the evaluation point Q")
        self.avec = top.avec

    def message_to_v(self, msg: Sequence) -> List:
        K, d, dp = self.K, self.d, self.dp
        if len(msg) != dp:
            raise ValueError(f"message length must be d/2 = {dp}")
        n = [K.zero] * d
        n[0] = msg[0]
        for l in range(1, dp):
            n[l] = msg[l]
            n[d - l] = K.neg(msg[l])
        return n

    def encode(self, msg: Sequence) -> List:
        """Codeword: the values of sum_l m_l l_l at Q + <t>."""
        n = self.message_to_v(msg)
        f = v_to_u(self.K, self.avec, n)
        return butterfly_evaluate(self.tower, f)

    def check(self, word: Sequence) -> Optional[List]:
        """The message if word is a codeword, else None."""
        K, d, dp = self.K, self.d, self.dp
        if len(word) != d:
            raise ValueError(f"word length must be d = {d}")
        f = butterfly_interpolate(self.tower, word)
        n = u_to_v(K, self.avec, f)
        if not K.is_zero(n[dp]):
            return None
        for l in range(1, dp):
            if not K.is_zero(K.add(n[l], n[d - l])):
                return None
        return [n[0]] + [n[l] for l in range(1, dp)]
