"""Differentiable models: the stacked-LSTM word classifier and the
character encoder-decoder with optional dot-product attention.

Parameters live in a flat ``{name: ndarray}`` dict so optimizers, gradient
checking and persistence can treat every model the same way.
"""

import numpy as np

from ..exceptions import EmptyInput, ShapeError, VocabError
from ..text import CharVocab
from .lstm import LstmLayerParams, sigmoid, stack_backward, stack_forward

ONEHOT = "onehot"
LEARNED = "learned"


def softmax(x, axis=-1):
    z = x - x.max(axis=axis, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=axis, keepdims=True)


def pad_batch(seqs, pad=CharVocab.PAD):
    """Stack index lists into a time-major ``(T, B)`` array plus a float mask."""
    T = max(len(s) for s in seqs)
    idx = np.full((T, len(seqs)), pad, dtype=np.int64)
    mask = np.zeros((T, len(seqs)))
    for b, s in enumerate(seqs):
        idx[:len(s), b] = s
        mask[:len(s), b] = 1.0
    return idx, mask


def _check_indices(seq, vocab, side):
    for i in seq:
        if not 0 <= i < len(vocab):
            raise VocabError(f"{side} index {i} outside vocabulary of size {len(vocab)}")


class _Embedding:
    """One-hot or learned lookup shared by both model kinds."""

    def __init__(self, name, vocab_size, mode):
        self.name = name
        self.vocab_size = vocab_size
        self.mode = mode

    def init(self, dim, rng, scale):
        if self.mode == ONEHOT:
            return {}
        if rng is None:
            return {self.name: np.zeros((self.vocab_size, dim))}
        return {self.name: rng.uniform(-scale, scale, (self.vocab_size, dim))}

    def forward(self, params, idx):
        if self.mode == ONEHOT:
            return np.eye(self.vocab_size)[idx]
        return params[self.name][idx]

    def backward(self, params, idx, dX, grads):
        if self.mode == ONEHOT:
            return
        dE = np.zeros_like(params[self.name])
        np.add.at(dE, idx.reshape(-1), dX.reshape(-1, dX.shape[-1]))
        grads[self.name] = dE


class SequenceModel:
    """Common plumbing for the two architectures."""

    kind = None
    loss_kind = None

    def __init__(self, params):
        self.params = params

    def n_params(self):
        return sum(p.size for p in self.params.values())

    def with_params(self, params):
        clone = object.__new__(type(self))
        clone.__dict__.update(self.__dict__)
        clone.params = params
        return clone

    def _layers(self, prefix, n):
        return [LstmLayerParams.from_params(self.params, f"{prefix}{k}") for k in range(n)]

    def loss(self, batch):
        return self.loss_and_grads(batch, need_grads=False)[0]


class TaggerNet(SequenceModel):
    """Character LSTM stack ending in a single sigmoid unit.

    With defaults this is the 15-35-25-1 network: a 15-dim learned character
    embedding, LSTM layers of 35 and 25 units, and a dense output of size 1.
    A batch is a list of ``(char_indices, label)`` with label 1 for Bengali.
    """

    kind = "tagger"
    loss_kind = "binary_ce"

    def __init__(self, vocab, embed_dim=15, hidden_dims=(35, 25), params=None,
                 seed=0, init="uniform", init_scale=0.08):
        self.vocab = vocab
        self.embed_dim = int(embed_dim)
        self.hidden_dims = tuple(int(h) for h in hidden_dims)
        self.embedding = _Embedding("emb", len(vocab), LEARNED)
        if params is None:
            params = self._init_params(np.random.default_rng(seed), init == "zeros", init_scale)
        super().__init__(params)

    def _init_params(self, rng, zeros, scale):
        params = self.embedding.init(self.embed_dim, None if zeros else rng, scale)
        dims = (self.embed_dim,) + self.hidden_dims
        for k in range(len(self.hidden_dims)):
            layer = LstmLayerParams.init(dims[k], dims[k + 1], rng, zeros=zeros)
            if not zeros and scale != 0.08:
                layer = LstmLayerParams(layer.W * scale / 0.08, layer.U * scale / 0.08, layer.b)
            params.update(layer.to_params(f"lstm{k}"))
        H = self.hidden_dims[-1]
        params["out.W"] = np.zeros((1, H)) if zeros else rng.uniform(-scale, scale, (1, H))
        params["out.b"] = np.zeros(1)
        return params

    def layers(self):
        return self._layers("lstm", len(self.hidden_dims))

    def logits(self, seqs):
        idx, mask = pad_batch(seqs)
        X = self.embedding.forward(self.params, idx)
        _, finals, _ = stack_forward(self.layers(), X, mask)
        return finals[-1][0] @ self.params["out.W"][0] + self.params["out.b"][0]

    def predict_proba(self, seqs):
        return sigmoid(self.logits(seqs))

    def loss_and_grads(self, batch, need_grads=True):
        if not batch:
            raise EmptyInput("empty batch")
        seqs = [s for s, _ in batch]
        for s in seqs:
            if not s:
                raise EmptyInput("empty character sequence in batch")
            _check_indices(s, self.vocab, "input")
        y = np.array([float(lbl) for _, lbl in batch])
        idx, mask = pad_batch(seqs)
        X = self.embedding.forward(self.params, idx)
        layers = self.layers()
        _, finals, caches = stack_forward(layers, X, mask)
        h_top = finals[-1][0]
        z = h_top @ self.params["out.W"][0] + self.params["out.b"][0]
        # stable BCE from logits: softplus(z) - y*z
        loss = np.mean(np.logaddexp(0.0, z) - y * z)
        if not need_grads:
            return loss, None
        B = len(batch)
        dz = (sigmoid(z) - y) / B
        grads = {"out.W": (dz @ h_top)[None, :], "out.b": np.array([dz.sum()])}
        dh_top = dz[:, None] * self.params["out.W"][0][None, :]
        d_finals = [None] * len(layers)
        d_finals[-1] = (dh_top, np.zeros_like(dh_top))
        dY = np.zeros((idx.shape[0], B, self.hidden_dims[-1]))
        dX, _, layer_grads = stack_backward(caches, dY, d_finals)
        for k, g in enumerate(layer_grads):
            grads.update(g.to_params(f"lstm{k}"))
        self.embedding.backward(self.params, idx, dX, grads)
        return loss, grads

    def describe(self):
        return {"embed_dim": self.embed_dim, "hidden_dims": list(self.hidden_dims)}


class Seq2SeqNet(SequenceModel):
    """Character encoder-decoder.

    The encoder's final ``(h, c)`` per layer seeds the decoder. With
    attention, each decoder step attends over the encoder's top-layer states
    by scaled dot product; the context goes through a projection and is
    concatenated to the decoder state before the output softmax. A batch is a
    list of ``(source_indices, target_indices)`` without SOS/EOS; the decoder
    reads ``SOS + target`` and is trained to emit ``target + EOS``.
    """

    kind = "seq2seq"
    loss_kind = "categorical_ce"

    def __init__(self, src_vocab, tgt_vocab, hidden_dims=(128,), attention=True,
                 embedding=ONEHOT, embed_dim=None, params=None, seed=0, init="uniform",
                 init_scale=0.08):
        self.src_vocab = src_vocab
        self.tgt_vocab = tgt_vocab
        self.hidden_dims = tuple(int(h) for h in hidden_dims)
        self.attention = bool(attention)
        if embedding not in (ONEHOT, LEARNED):
            raise ValueError(f"unknown embedding mode {embedding!r}")
        if embedding == LEARNED and not embed_dim:
            raise ValueError("learned embeddings need embed_dim")
        self.embedding_mode = embedding
        self.embed_dim = int(embed_dim) if embedding == LEARNED else None
        self.src_embedding = _Embedding("emb_src", len(src_vocab), embedding)
        self.tgt_embedding = _Embedding("emb_tgt", len(tgt_vocab), embedding)
        if params is None:
            params = self._init_params(np.random.default_rng(seed), init == "zeros", init_scale)
        super().__init__(params)
        H = self.hidden_dims[-1]
        feat = 2 * H if self.attention else H
        if self.params["out.W"].shape != (len(tgt_vocab), feat):
            raise ShapeError("output layer does not match target vocabulary")

    @property
    def hidden_dim(self):
        return self.hidden_dims[-1]

    def _input_dims(self):
        if self.embedding_mode == ONEHOT:
            return len(self.src_vocab), len(self.tgt_vocab)
        return self.embed_dim, self.embed_dim

    def _init_params(self, rng, zeros, scale):
        r = None if zeros else rng
        params = {}
        params.update(self.src_embedding.init(self.embed_dim, r, scale))
        src_in, tgt_in = self._input_dims()
        for prefix, first in (("enc", src_in), ("dec", tgt_in)):
            dims = (first,) + self.hidden_dims
            for k in range(len(self.hidden_dims)):
                layer = LstmLayerParams.init(dims[k], dims[k + 1], rng, zeros=zeros)
                if not zeros and scale != 0.08:
                    layer = LstmLayerParams(layer.W * scale / 0.08, layer.U * scale / 0.08, layer.b)
                params.update(layer.to_params(f"{prefix}{k}"))
        params.update(self.tgt_embedding.init(self.embed_dim, r, scale))
        H = self.hidden_dim
        V = len(self.tgt_vocab)
        unif = (lambda shape: np.zeros(shape)) if zeros else (
            lambda shape: rng.uniform(-scale, scale, shape))
        if self.attention:
            params["att.Wq"] = unif((H, H))
            params["att.Wc"] = unif((H, H))
        params["out.W"] = unif((V, 2 * H if self.attention else H))
        params["out.b"] = np.zeros(V)
        return params

    def encoder_layers(self):
        return self._layers("enc", len(self.hidden_dims))

    def decoder_layers(self):
        return self._layers("dec", len(self.hidden_dims))

    def encode(self, seqs):
        src_idx, src_mask = pad_batch(seqs)
        Xs = self.src_embedding.forward(self.params, src_idx)
        enc_out, finals, caches = stack_forward(self.encoder_layers(), Xs, src_mask)
        return src_idx, src_mask, enc_out, finals, caches

    def _attend(self, dec_out, enc_out, src_mask):
        H = self.hidden_dim
        q = dec_out @ self.params["att.Wq"].T
        scores = np.einsum("tbh,sbh->tbs", q, enc_out) / np.sqrt(H)
        valid = (src_mask.T > 0)[None, :, :]
        scores = np.where(valid, scores, -np.inf)
        alpha = softmax(scores, axis=-1)
        ctx = np.einsum("tbs,sbh->tbh", alpha, enc_out)
        proj = ctx @ self.params["att.Wc"].T
        return q, alpha, ctx, proj

    def _output(self, dec_out, attn_proj, use_attention):
        W = self.params["out.W"]
        H = self.hidden_dim
        if use_attention:
            feat = np.concatenate([dec_out, attn_proj], axis=-1)
            return feat @ W.T + self.params["out.b"], feat
        return dec_out @ W[:, :H].T + self.params["out.b"], dec_out

    def forward(self, batch_src, batch_dec_in, attention=None):
        """Distributions ``(T, B, V)`` for teacher-forced decoder inputs."""
        use_att = self.attention if attention is None else (attention and self.attention)
        for src in batch_src:
            _check_indices(src, self.src_vocab, "source")
        for dec in batch_dec_in:
            _check_indices(dec, self.tgt_vocab, "target")
        _, src_mask, enc_out, finals, _ = self.encode(batch_src)
        dec_idx, dec_mask = pad_batch(batch_dec_in)
        Xd = self.tgt_embedding.forward(self.params, dec_idx)
        dec_out, _, _ = stack_forward(self.decoder_layers(), Xd, dec_mask, init_states=finals)
        proj = self._attend(dec_out, enc_out, src_mask)[3] if use_att else None
        logits, _ = self._output(dec_out, proj, use_att)
        return softmax(logits)

    def loss_and_grads(self, batch, need_grads=True):
        if not batch:
            raise EmptyInput("empty batch")
        for src, tgt in batch:
            if not src:
                raise EmptyInput("empty source sequence in batch")
            _check_indices(src, self.src_vocab, "source")
            _check_indices(tgt, self.tgt_vocab, "target")
        src_idx, src_mask, enc_out, finals, enc_caches = self.encode([s for s, _ in batch])
        dec_in = [[CharVocab.SOS] + list(t) for _, t in batch]
        labels = [list(t) + [CharVocab.EOS] for _, t in batch]
        dec_idx, dec_mask = pad_batch(dec_in)
        lab_idx, _ = pad_batch(labels)
        Xd = self.tgt_embedding.forward(self.params, dec_idx)
        dec_out, _, dec_caches = stack_forward(
            self.decoder_layers(), Xd, dec_mask, init_states=finals)
        if self.attention:
            q, alpha, ctx, proj = self._attend(dec_out, enc_out, src_mask)
        else:
            proj = None
        logits, feat = self._output(dec_out, proj, self.attention)
        z = logits - logits.max(axis=-1, keepdims=True)
        logp = z - np.log(np.exp(z).sum(axis=-1, keepdims=True))
        n_tok = dec_mask.sum()
        gold = np.take_along_axis(logp, lab_idx[..., None], axis=-1)[..., 0]
        loss = -(gold * dec_mask).sum() / n_tok
        if not need_grads:
            return loss, None

        H = self.hidden_dim
        probs = np.exp(logp)
        dlogits = probs
        np.put_along_axis(dlogits, lab_idx[..., None],
                          np.take_along_axis(dlogits, lab_idx[..., None], axis=-1) - 1.0, axis=-1)
        dlogits *= dec_mask[..., None] / n_tok
        flat_d = dlogits.reshape(-1, dlogits.shape[-1])
        grads = {
            "out.W": flat_d.T @ feat.reshape(-1, feat.shape[-1]),
            "out.b": flat_d.sum(axis=0),
        }
        dfeat = dlogits @ self.params["out.W"]
        d_dec = dfeat[..., :H].copy()
        d_enc = np.zeros_like(enc_out)
        if self.attention:
            dproj = dfeat[..., H:]
            grads["att.Wc"] = dproj.reshape(-1, H).T @ ctx.reshape(-1, H)
            dctx = dproj @ self.params["att.Wc"]
            dalpha = np.einsum("tbh,sbh->tbs", dctx, enc_out)
            d_enc += np.einsum("tbs,tbh->sbh", alpha, dctx)
            dscores = alpha * (dalpha - (alpha * dalpha).sum(axis=-1, keepdims=True))
            dscores /= np.sqrt(H)
            dq = np.einsum("tbs,sbh->tbh", dscores, enc_out)
            d_enc += np.einsum("tbs,tbh->sbh", dscores, q)
            grads["att.Wq"] = dq.reshape(-1, H).T @ dec_out.reshape(-1, H)
            d_dec += dq @ self.params["att.Wq"]
        dXd, d_init, dec_grads = stack_backward(dec_caches, d_dec)
        for k, g in enumerate(dec_grads):
            grads.update(g.to_params(f"dec{k}"))
        self.tgt_embedding.backward(self.params, dec_idx, dXd, grads)
        dXs, _, enc_grads = stack_backward(enc_caches, d_enc, d_init)
        for k, g in enumerate(enc_grads):
            grads.update(g.to_params(f"enc{k}"))
        self.src_embedding.backward(self.params, src_idx, dXs, grads)
        return loss, grads

    def decode(self, source, max_len, attention=None):
        """Greedy decoding of one source index list; SOS/EOS are not returned."""
        if not source:
            raise EmptyInput("cannot decode an empty source")
        _check_indices(source, self.src_vocab, "source")
        use_att = self.attention if attention is None else (attention and self.attention)
        _, src_mask, enc_out, states, _ = self.encode([list(source)])
        layers = self.decoder_layers()
        one = np.ones((1, 1))
        token = CharVocab.SOS
        out = []
        for _ in range(max_len):
            x = self.tgt_embedding.forward(self.params, np.array([[token]]))
            h, states, _ = stack_forward(layers, x, one, init_states=states)
            proj = self._attend(h, enc_out, src_mask)[3] if use_att else None
            logits, _ = self._output(h, proj, use_att)
            step = logits[0, 0].copy()
            step[[CharVocab.PAD, CharVocab.SOS]] = -np.inf
            token = int(np.argmax(step))
            if token == CharVocab.EOS:
                break
            out.append(token)
        return out

    def describe(self):
        return {
            "hidden_dims": list(self.hidden_dims),
            "attention": self.attention,
            "embedding": self.embedding_mode,
            "embed_dim": self.embed_dim,
        }
