"""Minimal reverse-mode tape over numpy arrays.

The model code in this package needs exact gradients for a handful of
composite operations (bidirectional LSTM passes, additive attention pooling,
span scoring, the usual losses). Rather than a general autograd, each such
operation is one tape node with a hand-written backward pass, internally
vectorized with numpy. That keeps graphs small (tens of nodes per example)
and fast while staying checkable against central finite differences.

Everything runs in float64. Gradients accumulate into ``Tensor.grad``;
callers reset leaf grads between steps.
"""

from __future__ import annotations

import numpy as np


class Tensor:
    """A value in the tape: numpy payload plus backward bookkeeping."""

    __slots__ = ("data", "grad", "requires", "_parents", "_backward")

    def __init__(self, data, requires: bool = False, parents=(), backward=None):
        self.data = np.asarray(data, dtype=np.float64)
        self.grad: np.ndarray | None = None
        self.requires = requires
        self._parents = parents
        self._backward = backward

    @property
    def shape(self):
        return self.data.shape

    def __repr__(self) -> str:
        return f"Tensor(shape={self.data.shape}, requires={self.requires})"


def parameter(data) -> Tensor:
    return Tensor(np.array(data, dtype=np.float64), requires=True)


def constant(data) -> Tensor:
    return Tensor(data, requires=False)


def _node(data, parents, backward) -> Tensor:
    requires = any(p.requires for p in parents)
    return Tensor(data, requires=requires, parents=parents, backward=backward if requires else None)


def _accum(t: Tensor, g: np.ndarray) -> None:
    if not t.requires:
        return
    if t.grad is None:
        t.grad = np.zeros_like(t.data)
    t.grad += g


def backward(root: Tensor) -> None:
    """Backpropagate from a scalar root through the tape."""
    if root.data.shape != ():
        raise ValueError("backward expects a scalar root")
    order: list[Tensor] = []
    seen: set[int] = set()
    stack: list[tuple[Tensor, bool]] = [(root, False)]
    while stack:
        node, expanded = stack.pop()
        if expanded:
            order.append(node)
            continue
        if id(node) in seen:
            continue
        seen.add(id(node))
        stack.append((node, True))
        for p in node._parents:
            if p.requires and id(p) not in seen:
                stack.append((p, False))
    root.grad = np.array(1.0)
    for node in reversed(order):
        if node._backward is not None and node.grad is not None:
            node._backward(node.grad)


def _unbroadcast(g: np.ndarray, shape: tuple[int, ...]) -> np.ndarray:
    while g.ndim > len(shape):
        g = g.sum(axis=0)
    for ax, dim in enumerate(shape):
        if dim == 1 and g.shape[ax] != 1:
            g = g.sum(axis=ax, keepdims=True)
    return g


# ---------------------------------------------------------------------------
# elementwise and linear algebra
# ---------------------------------------------------------------------------


def add(a: Tensor, b: Tensor) -> Tensor:
    out_data = a.data + b.data

    def bwd(g):
        _accum(a, _unbroadcast(g, a.data.shape))
        _accum(b, _unbroadcast(g, b.data.shape))

    return _node(out_data, (a, b), bwd)


def scale(a: Tensor, s: float) -> Tensor:
    def bwd(g):
        _accum(a, g * s)

    return _node(a.data * s, (a,), bwd)


def matmul(a: Tensor, b: Tensor) -> Tensor:
    out_data = a.data @ b.data
    a_is_vec = a.data.ndim == 1
    b_is_vec = b.data.ndim == 1

    def bwd(g):
        if a_is_vec and b_is_vec:  # dot -> scalar
            _accum(a, g * b.data)
            _accum(b, g * a.data)
        elif a_is_vec:  # (k,) @ (k,m) -> (m,)
            _accum(a, b.data @ g)
            _accum(b, np.outer(a.data, g))
        elif b_is_vec:  # (n,k) @ (k,) -> (n,)
            _accum(a, np.outer(g, b.data))
            _accum(b, a.data.T @ g)
        else:
            _accum(a, g @ b.data.T)
            _accum(b, a.data.T @ g)

    return _node(out_data, (a, b), bwd)


def tanh(a: Tensor) -> Tensor:
    out_data = np.tanh(a.data)

    def bwd(g):
        _accum(a, g * (1.0 - out_data * out_data))

    return _node(out_data, (a,), bwd)


def _sigmoid(x: np.ndarray) -> np.ndarray:
    # Clip keeps exp in range; saturation beyond +-500 is exact anyway.
    return 1.0 / (1.0 + np.exp(-np.clip(x, -500.0, 500.0)))


def sigmoid(a: Tensor) -> Tensor:
    out_data = _sigmoid(a.data)

    def bwd(g):
        _accum(a, g * out_data * (1.0 - out_data))

    return _node(out_data, (a,), bwd)


# ---------------------------------------------------------------------------
# structure: concatenation, slicing, pooling
# ---------------------------------------------------------------------------


def concat(tensors: list[Tensor], axis: int = 0) -> Tensor:
    datas = [t.data for t in tensors]
    out_data = np.concatenate(datas, axis=axis)
    sizes = [d.shape[axis] for d in datas]

    def bwd(g):
        offset = 0
        for t, size in zip(tensors, sizes):
            index = [slice(None)] * g.ndim
            index[axis] = slice(offset, offset + size)
            _accum(t, g[tuple(index)])
            offset += size

    return _node(out_data, tuple(tensors), bwd)


def slice_rows(a: Tensor, lo: int, hi: int) -> Tensor:
    def bwd(g):
        full = np.zeros_like(a.data)
        full[lo:hi] = g
        _accum(a, full)

    return _node(a.data[lo:hi], (a,), bwd)


def take(a: Tensor, index) -> Tensor:
    """Pick a sub-tensor by integer or tuple index; backward scatters."""

    def bwd(g):
        full = np.zeros_like(a.data)
        full[index] = g
        _accum(a, full)

    return _node(a.data[index], (a,), bwd)


def stack_rows(vectors: list[Tensor]) -> Tensor:
    out_data = np.stack([v.data for v in vectors], axis=0)

    def bwd(g):
        for i, v in enumerate(vectors):
            _accum(v, g[i])

    return _node(out_data, tuple(vectors), bwd)


def mean_rows(a: Tensor) -> Tensor:
    n = a.data.shape[0]

    def bwd(g):
        _accum(a, np.broadcast_to(g / n, a.data.shape).copy())

    return _node(a.data.mean(axis=0), (a,), bwd)


def embedding_gather(table: Tensor, ids: list[int]) -> Tensor:
    idx = np.asarray(ids, dtype=np.intp)

    def bwd(g):
        full = np.zeros_like(table.data)
        np.add.at(full, idx, g)
        _accum(table, full)

    return _node(table.data[idx], (table,), bwd)


# ---------------------------------------------------------------------------
# recurrent core
# ---------------------------------------------------------------------------


def _lstm_forward(x, Wx, Wh, b):
    # Gate layout: [input, forget, output, candidate]; sigmoid gates first so
    # one call covers all three.
    T = x.shape[0]
    h = b.shape[0] // 4
    xw = x @ Wx + b  # input contributions for every step at once
    hs = np.empty((T, h))
    cs = np.empty((T, h))
    gates = np.empty((T, 4 * h))
    h_prev = np.zeros(h)
    c_prev = np.zeros(h)
    for t in range(T):
        z = xw[t] + h_prev @ Wh
        sig = _sigmoid(z[: 3 * h])
        i, f, o = sig[:h], sig[h : 2 * h], sig[2 * h :]
        g_ = np.tanh(z[3 * h :])
        c = f * c_prev + i * g_
        h_cur = o * np.tanh(c)
        gates[t, : 3 * h] = sig
        gates[t, 3 * h :] = g_
        cs[t] = c
        hs[t] = h_cur
        h_prev, c_prev = h_cur, c
    return hs, (x, Wx, Wh, gates, cs, hs)


def _lstm_backward(d_hs, cache):
    x, Wx, Wh, gates, cs, hs = cache
    T = x.shape[0]
    h = cs.shape[1]
    dzs = np.empty((T, 4 * h))
    dh_next = np.zeros(h)
    dc_next = np.zeros(h)
    tanh_cs = np.tanh(cs)
    for t in range(T - 1, -1, -1):
        i = gates[t, :h]
        f = gates[t, h : 2 * h]
        o = gates[t, 2 * h : 3 * h]
        g_ = gates[t, 3 * h :]
        c_prev = cs[t - 1] if t > 0 else 0.0
        tanh_c = tanh_cs[t]
        dh = d_hs[t] + dh_next
        dc = dc_next + dh * o * (1.0 - tanh_c * tanh_c)
        dz = dzs[t]
        dz[:h] = dc * g_ * i * (1.0 - i)
        dz[h : 2 * h] = dc * c_prev * f * (1.0 - f)
        dz[2 * h : 3 * h] = dh * tanh_c * o * (1.0 - o)
        dz[3 * h :] = dc * i * (1.0 - g_ * g_)
        dc_next = dc * f
        dh_next = Wh @ dz
    # Weight gradients batch into single matmuls over the collected dz rows.
    h_prevs = np.vstack([np.zeros((1, h)), hs[:-1]])
    return dzs @ Wx.T, x.T @ dzs, h_prevs.T @ dzs, dzs.sum(axis=0)


def lstm_bi(x: Tensor, Wxf: Tensor, Whf: Tensor, bf: Tensor,
            Wxb: Tensor, Whb: Tensor, bb: Tensor) -> Tensor:
    """Bidirectional LSTM over a (T, d) sequence -> (T, 2h) outputs."""
    hs_f, cache_f = _lstm_forward(x.data, Wxf.data, Whf.data, bf.data)
    hs_b_rev, cache_b = _lstm_forward(x.data[::-1], Wxb.data, Whb.data, bb.data)
    out_data = np.concatenate([hs_f, hs_b_rev[::-1]], axis=1)
    h = bf.data.shape[0] // 4

    def bwd(g):
        dx_f, dWxf, dWhf, dbf = _lstm_backward(g[:, :h], cache_f)
        dx_b, dWxb, dWhb, dbb = _lstm_backward(g[:, h:][::-1], cache_b)
        _accum(x, dx_f + dx_b[::-1])
        _accum(Wxf, dWxf)
        _accum(Whf, dWhf)
        _accum(bf, dbf)
        _accum(Wxb, dWxb)
        _accum(Whb, dWhb)
        _accum(bb, dbb)

    return _node(out_data, (x, Wxf, Whf, bf, Wxb, Whb, bb), bwd)


def attention_pool(x: Tensor, Wa: Tensor, ba: Tensor, v: Tensor) -> Tensor:
    """Additive attention over rows of x (T, D) -> pooled vector (D,)."""
    u = np.tanh(x.data @ Wa.data + ba.data)  # (T, A)
    scores = u @ v.data  # (T,)
    m = scores.max()
    e = np.exp(scores - m)
    alpha = e / e.sum()
    out_data = alpha @ x.data  # (D,)

    def bwd(g):
        d_alpha = x.data @ g  # (T,)
        dx = np.outer(alpha, g)
        ds = alpha * (d_alpha - alpha @ d_alpha)
        dv = u.T @ ds
        du = np.outer(ds, v.data)
        dz = du * (1.0 - u * u)
        _accum(x, dx + dz @ Wa.data.T)
        _accum(Wa, x.data.T @ dz)
        _accum(ba, dz.sum(axis=0))
        _accum(v, dv)

    return _node(out_data, (x, Wa, ba, v), bwd)


def span_combine(Oq: Tensor, Oh: Tensor, W1: Tensor, W2: Tensor,
                 W3: Tensor, b: Tensor) -> Tensor:
    """Interaction block for span scoring.

    Produces tanh(Oq{i} W1 + Oh{j} W2 + W3{k} + b) for every header j,
    operator k and question position i: shape (m, 3, n, A). The tanh is
    what lets the chosen column and operator actually move the span
    distribution instead of shifting all positions uniformly.
    """
    t1 = Oq.data @ W1.data  # (n, A)
    t2 = Oh.data @ W2.data  # (m, A)
    t3 = W3.data  # (3, A)
    out_data = np.tanh(
        t1[None, None, :, :] + t2[:, None, None, :] + t3[None, :, None, :] + b.data
    )

    def bwd(g):
        dz = g * (1.0 - out_data * out_data)  # (m, 3, n, A)
        dt1 = dz.sum(axis=(0, 1))  # (n, A)
        dt2 = dz.sum(axis=(1, 2))  # (m, A)
        _accum(Oq, dt1 @ W1.data.T)
        _accum(W1, Oq.data.T @ dt1)
        _accum(Oh, dt2 @ W2.data.T)
        _accum(W2, Oh.data.T @ dt2)
        _accum(W3, dz.sum(axis=(0, 2)))
        _accum(b, dz.sum(axis=(0, 1, 2)))

    return _node(out_data, (Oq, Oh, W1, W2, W3, b), bwd)


def tensordot_last(H: Tensor, v: Tensor) -> Tensor:
    """Contract the trailing axis: (..., A) x (A,) -> (...)."""
    out_data = H.data @ v.data

    def bwd(g):
        axes = list(range(g.ndim))
        _accum(H, g[..., None] * v.data)
        _accum(v, np.tensordot(g, H.data, axes=(axes, axes)))

    return _node(out_data, (H, v), bwd)


# ---------------------------------------------------------------------------
# losses and probability utilities
# ---------------------------------------------------------------------------


def softmax(logits: np.ndarray, axis: int = -1) -> np.ndarray:
    m = logits.max(axis=axis, keepdims=True)
    e = np.exp(logits - m)
    return e / e.sum(axis=axis, keepdims=True)


def log_softmax(logits: np.ndarray, axis: int = -1) -> np.ndarray:
    m = logits.max(axis=axis, keepdims=True)
    s = logits - m
    return s - np.log(np.exp(s).sum(axis=axis, keepdims=True))


def softmax_cross_entropy(logits: Tensor, target: int) -> Tensor:
    p = softmax(logits.data)
    loss = -np.log(max(p[target], 1e-300))

    def bwd(g):
        d = p.copy()
        d[target] -= 1.0
        _accum(logits, g * d)

    return _node(loss, (logits,), bwd)


def bce_with_logits(logits: Tensor, targets: np.ndarray) -> Tensor:
    """Summed binary cross-entropy of independent sigmoid scores."""
    x = logits.data
    y = np.asarray(targets, dtype=np.float64)
    loss = np.sum(np.maximum(x, 0.0) - x * y + np.log1p(np.exp(-np.abs(x))))

    def bwd(g):
        _accum(logits, g * (_sigmoid(x) - y))

    return _node(loss, (logits,), bwd)


def add_n(tensors: list[Tensor]) -> Tensor:
    out_data = np.array(sum(float(t.data) for t in tensors))

    def bwd(g):
        for t in tensors:
            _accum(t, g)

    return _node(out_data, tuple(tensors), bwd)
