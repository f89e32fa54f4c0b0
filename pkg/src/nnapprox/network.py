"""Networks as chains of dense matrices with an element-wise activation.

A network holds matrices [W0, ..., WL]; evaluation is
WL @ a(W_{L-1} @ a( ... a(W0 @ x))), with the activation applied between
consecutive matrices and never after WL.  There are no shift vectors; any
construction that needs a constant feeds it as an input coordinate.  W_i has
shape (p_{i+1}, p_i) and acts by left multiplication on column vectors, so
the width vector is p = (p_0, ..., p_{L+1}) and depth L counts activations.

Layers are stored internally in block-diagonal form (a plain matrix is a
single block).  The parallel() combinator produces genuinely block-diagonal
layers, which keeps the wide monomial networks evaluable without
materializing their mostly-zero dense form.  The dense view of any layer is
available through Network.weights.
"""

from __future__ import annotations

import json

import numpy as np

from . import _kernels


class NetworkError(ValueError):
    """Structural problem with a network or an operation on it."""


class ShapeMismatchError(NetworkError):
    pass


class ActivationMismatchError(NetworkError):
    pass


# ---------------------------------------------------------------------------
# activations


class Activation:
    """Element-wise map alpha(x) = s(x) * x for a sign selector s into {-1,0,+1}.

    s identically +1 gives the identity, s = 1{x >= 0} gives ReLU and
    s = sign with s(0) = +1 gives the absolute value.  Arbitrary selectors
    (possibly discontinuous) are supported for entropy experiments but have
    no compiled kernel and cannot be serialized.
    """

    __slots__ = ("name", "selector", "kernel_code")

    def __init__(self, name, selector, kernel_code=None):
        self.name = name
        self.selector = selector
        self.kernel_code = kernel_code

    def apply(self, x):
        if self.kernel_code == _kernels.ACT_IDENTITY:
            return x
        if self.kernel_code == _kernels.ACT_RELU:
            return np.maximum(x, 0.0)
        if self.kernel_code == _kernels.ACT_ABS:
            return np.abs(x)
        return self.selector(np.asarray(x, dtype=np.float64)) * x

    def __repr__(self):
        return f"Activation({self.name})"


IDENTITY = Activation("identity", lambda x: np.ones_like(x), _kernels.ACT_IDENTITY)
RELU = Activation("relu", lambda x: np.where(x >= 0, 1.0, 0.0), _kernels.ACT_RELU)
ABS = Activation("abs", lambda x: np.where(x >= 0, 1.0, -1.0), _kernels.ACT_ABS)

ACTIVATIONS = {a.name: a for a in (IDENTITY, RELU, ABS)}


def general_activation(selector, name="general"):
    """Activation from an arbitrary vectorized sign selector (values in {-1,0,1})."""
    return Activation(name, selector, kernel_code=None)


# ---------------------------------------------------------------------------
# layers


class BlockDiagonal:
    """A block-diagonal matrix stored as its diagonal blocks, in order."""

    __slots__ = ("blocks", "shape")

    def __init__(self, blocks):
        bs = []
        rows = cols = 0
        for b in blocks:
            a = np.array(b, dtype=np.float64, order="C")
            if a.ndim != 2 or a.size == 0:
                raise NetworkError(f"block of shape {a.shape} is not a matrix")
            if not np.all(np.isfinite(a)):
                raise NetworkError("matrix entries must be finite")
            a.setflags(write=False)
            bs.append(a)
            rows += a.shape[0]
            cols += a.shape[1]
        if not bs:
            raise NetworkError("a layer needs at least one block")
        self.blocks = tuple(bs)
        self.shape = (rows, cols)

    def to_dense(self):
        out = np.zeros(self.shape)
        ro = co = 0
        for b in self.blocks:
            out[ro : ro + b.shape[0], co : co + b.shape[1]] = b
            ro += b.shape[0]
            co += b.shape[1]
        return out

    def matmul_batch(self, x):
        """x of shape (n, cols) -> (n, rows)."""
        out = np.zeros((x.shape[0], self.shape[0]))
        ro = co = 0
        for b in self.blocks:
            out[:, ro : ro + b.shape[0]] = x[:, co : co + b.shape[1]] @ b.T
            ro += b.shape[0]
            co += b.shape[1]
        return out

    def abs_matmul_left(self, p):
        """p @ |self| for p of shape (k, rows) -> (k, cols)."""
        out = np.zeros((p.shape[0], self.shape[1]))
        ro = co = 0
        for b in self.blocks:
            out[:, co : co + b.shape[1]] = p[:, ro : ro + b.shape[0]] @ np.abs(b)
            ro += b.shape[0]
            co += b.shape[1]
        return out

    def l1(self):
        return float(sum(np.sum(np.abs(b)) for b in self.blocks))

    def entry_count(self):
        """Dense entry count rows*cols (structural zeros included)."""
        return self.shape[0] * self.shape[1]


def _as_layer(w):
    if isinstance(w, BlockDiagonal):
        return w
    return BlockDiagonal([w])


# ---------------------------------------------------------------------------
# networks


class Network:
    """Immutable matrix chain with a shared activation.

    Evaluation, the path norm and all combinators treat the network purely
    as its list of matrices; metadata is a free-form dict recording how the
    network was constructed (name, m, gamma, d, variant, ...).
    """

    __slots__ = ("activation", "layers", "meta", "_packed")

    def __init__(self, activation, weights, meta=None):
        if not isinstance(activation, Activation):
            raise NetworkError("activation must be an Activation instance")
        layers = tuple(_as_layer(w) for w in weights)
        if not layers:
            raise NetworkError("a network needs at least one matrix")
        for i in range(len(layers) - 1):
            if layers[i + 1].shape[1] != layers[i].shape[0]:
                raise ShapeMismatchError(
                    f"layer {i + 1} expects input of size {layers[i + 1].shape[1]}, "
                    f"but layer {i} produces {layers[i].shape[0]}"
                )
        self.activation = activation
        self.layers = layers
        self.meta = dict(meta) if meta else {}
        self._packed = None

    # -- structure ---------------------------------------------------------

    @property
    def widths(self):
        return (self.layers[0].shape[1],) + tuple(l.shape[0] for l in self.layers)

    @property
    def depth(self):
        """Number of activations L; the chain has L + 1 matrices."""
        return len(self.layers) - 1

    @property
    def in_dim(self):
        return self.layers[0].shape[1]

    @property
    def out_dim(self):
        return self.layers[-1].shape[0]

    @property
    def max_width(self):
        return max(self.widths)

    @property
    def weights(self):
        """Dense view of the matrices (materializes block-diagonal layers)."""
        return tuple(l.to_dense() for l in self.layers)

    def param_count(self):
        return sum(l.entry_count() for l in self.layers)

    def __repr__(self):
        w = self.widths
        shown = w if len(w) <= 8 else w[:4] + ("...",) + w[-3:]
        return f"Network({self.activation.name}, widths={shown})"

    # -- evaluation ---------------------------------------------------------

    def _pack(self):
        if self._packed is None:
            metas, ptrs, datas = [], [0], []
            layer_ptr = [0]
            for lay in self.layers:
                ro = co = 0
                for b in lay.blocks:
                    metas.append((ro, co, b.shape[0], b.shape[1]))
                    datas.append(b.ravel())
                    ptrs.append(ptrs[-1] + b.size)
                    ro += b.shape[0]
                    co += b.shape[1]
                layer_ptr.append(len(metas))
            self._packed = (
                np.asarray(layer_ptr, dtype=np.int64),
                np.asarray(metas, dtype=np.int64).reshape(len(metas), 4),
                np.asarray(ptrs, dtype=np.int64),
                np.concatenate(datas),
                np.asarray(self.widths, dtype=np.int64),
            )
        return self._packed

    def __call__(self, x, backend=None):
        return evaluate(self, x, backend=backend)


def evaluate(net, x, backend=None):
    """Evaluate net on a vector of length p0 or a batch of shape (n, p0)."""
    x = np.asarray(x, dtype=np.float64)
    single = x.ndim == 1
    batch = x[None, :] if single else x
    if batch.ndim != 2:
        raise ShapeMismatchError(f"input must be a vector or a batch, got ndim={x.ndim}")
    if batch.shape[1] != net.in_dim:
        raise ShapeMismatchError(
            f"layer 0 expects input of length {net.in_dim}, got {batch.shape[1]}"
        )
    if not np.all(np.isfinite(batch)):
        raise NetworkError("input has non-finite entries")
    code = net.activation.kernel_code
    if code is None:
        cur = batch
        last = len(net.layers) - 1
        for i, lay in enumerate(net.layers):
            cur = lay.matmul_batch(cur)
            if i < last:
                cur = net.activation.apply(cur)
        out = cur
    else:
        batch = np.ascontiguousarray(batch)
        out = _kernels.eval_chain(net._pack(), batch, code, backend=backend)
    return out[0] if single else out


# ---------------------------------------------------------------------------
# path norm and parameter norms


def path_matrix(net):
    """|WL| @ |W_{L-1}| @ ... @ |W0|, dense, of shape (p_{L+1}, p_0)."""
    p = np.abs(net.layers[-1].to_dense())
    for lay in reversed(net.layers[:-1]):
        p = lay.abs_matmul_left(p)
    return p


def path_norm(net):
    """Sum of the entries of the path matrix (the l1 norm of the p0-vector
    for scalar outputs, summed over output coordinates otherwise)."""
    return float(np.sum(path_matrix(net)))


def per_layer_l1(net):
    return [lay.l1() for lay in net.layers]


def l1_param_norm(net):
    return float(sum(per_layer_l1(net)))


# ---------------------------------------------------------------------------
# combinators


def _check_same_activation(a, b):
    if a.name != b.name or a.kernel_code != b.kernel_code:
        raise ActivationMismatchError(f"activations differ: {a.name} vs {b.name}")
    if a.kernel_code is None and a is not b:
        raise ActivationMismatchError("general activations must be the same object")


def compose(first, second, meta=None):
    """Feed first's output into second; one activation sits at the junction."""
    _check_same_activation(first.activation, second.activation)
    if second.in_dim != first.out_dim:
        raise ShapeMismatchError(
            f"second network expects input {second.in_dim}, first produces {first.out_dim}"
        )
    return Network(first.activation, first.layers + second.layers, meta=meta)


def parallel(nets, meta=None):
    """Block-diagonal stack of networks sharing one activation.

    Networks of unequal depth are padded with leading identity layers.  With
    the abs activation an identity layer preserves values only on
    nonnegative channels; all constructions here feed nonnegative inputs
    (the constant 1, coordinates in [0,1], replicated coordinates).
    """
    nets = list(nets)
    if not nets:
        raise NetworkError("parallel() needs at least one network")
    act = nets[0].activation
    for n in nets[1:]:
        _check_same_activation(act, n.activation)
    n_layers = max(len(n.layers) for n in nets)
    padded = []
    for n in nets:
        pad = n_layers - len(n.layers)
        if pad:
            eye = BlockDiagonal([np.eye(n.in_dim)])
            padded.append((eye,) * pad + n.layers)
        else:
            padded.append(n.layers)
    stacked = []
    for i in range(n_layers):
        blocks = []
        for lays in padded:
            blocks.extend(lays[i].blocks)
        stacked.append(BlockDiagonal(blocks))
    return Network(act, stacked, meta=meta)


def prepend_layer(net, w, meta=None):
    """New first matrix w; the old first layer now sees a(w @ x)."""
    return Network(net.activation, (_as_layer(w),) + net.layers, meta=meta or net.meta)


def append_layer(net, w, meta=None):
    """New last matrix w applied after an activation on the old output."""
    return Network(net.activation, net.layers + (_as_layer(w),), meta=meta or net.meta)


def identity_chain(dim, n_matrices, activation=ABS):
    """Chain of n identity matrices; value-preserving on nonnegative inputs."""
    if n_matrices < 1:
        raise NetworkError("identity_chain needs at least one matrix")
    return Network(activation, [np.eye(dim)] * n_matrices)


# ---------------------------------------------------------------------------
# JSON wire format


def network_to_dict(net):
    if net.activation.name not in ACTIVATIONS:
        raise NetworkError("only abs/relu/identity networks serialize to JSON")
    return {
        "activation": net.activation.name,
        "weights": [w.tolist() for w in net.weights],
        "meta": net.meta,
    }


def network_from_dict(d):
    try:
        act = ACTIVATIONS[d["activation"]]
        weights = [np.asarray(w, dtype=np.float64) for w in d["weights"]]
    except (KeyError, TypeError) as e:
        raise NetworkError(f"malformed network dict: {e}") from e
    return Network(act, weights, meta=d.get("meta"))


def network_to_json(net, indent=None):
    return json.dumps(network_to_dict(net), indent=indent)


def network_from_json(s):
    return network_from_dict(json.loads(s))
