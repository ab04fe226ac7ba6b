import numpy as np
import pytest

from sqlsketch import autodiff as ad
from sqlsketch import heads
from sqlsketch.corpus import Example, TableSchema
from sqlsketch.encoder import EncoderConfig, Vocabulary
from sqlsketch.sketch import Aggregate, Condition, Operator, SQLQuery

SCHEMA = TableSchema("t", ("points", "rank"), ("real", "real"))
EXAMPLE = Example(
    "points when rank is 2",
    "t",
    SQLQuery(Aggregate.NONE, 0, (Condition(1, Operator.EQ, "2"),)),
)


def setup_model(embed_dim=6, hidden_dim=6, seed=0):
    vocab = Vocabulary.build([["points", "when", "rank", "is", "2"]])
    config = EncoderConfig(
        vocab_size=len(vocab), embed_dim=embed_dim, hidden_dim=hidden_dim, seed=seed
    )
    params = heads.init_params(config)
    feats = heads.featurize(EXAMPLE, SCHEMA, vocab, "0")
    return params, config, feats


def test_distribution_shapes_and_normalization():
    params, config, feats = setup_model()
    dists = heads.forward(params, config, feats, wn_condition=1)
    n, m = len(feats.tokens), len(SCHEMA.headers)
    assert dists.p_sa.shape == (6,) and abs(dists.p_sa.sum() - 1) < 1e-6
    assert dists.p_sc.shape == (m,) and abs(dists.p_sc.sum() - 1) < 1e-6
    assert dists.p_wn.shape == (5,) and abs(dists.p_wn.sum() - 1) < 1e-6
    assert dists.p_wc.shape == (m,)
    assert ((dists.p_wc >= 0) & (dists.p_wc <= 1)).all()
    assert dists.p_wo.shape == (m, 3)
    assert np.allclose(dists.p_wo.sum(axis=1), 1, atol=1e-6)
    assert dists.wv_start_logp.shape == (m, 3, n)
    assert np.allclose(np.exp(dists.wv_start_logp).sum(axis=-1), 1, atol=1e-6)
    assert np.allclose(np.exp(dists.wv_end_logp).sum(axis=-1), 1, atol=1e-6)


def test_forward_deterministic():
    params, config, feats = setup_model(seed=5)
    a = heads.forward(params, config, feats, wn_condition=1)
    b = heads.forward(params, config, feats, wn_condition=1)
    assert np.array_equal(a.p_sa, b.p_sa)
    assert np.array_equal(a.wv_end_logp, b.wv_end_logp)


def test_inference_conditioning_matches_explicit_argmax():
    params, config, feats = setup_model(seed=2)
    auto = heads.forward(params, config, feats, wn_condition=None)
    wn_pred = int(np.argmax(auto.p_wn))
    forced = heads.forward(params, config, feats, wn_condition=wn_pred)
    assert np.array_equal(auto.p_wc, forced.p_wc)
    # A different conditioning signal must actually move the wc head.
    other = heads.forward(params, config, feats, wn_condition=(wn_pred + 1) % 5)
    assert not np.array_equal(auto.p_wc, other.p_wc)


def one_hot_distributions(gold: heads.GoldTargets, n: int, m: int) -> heads.SlotDistributions:
    tiny = 1e-12
    p_sa = np.full(6, tiny)
    p_sa[gold.sa] = 1.0
    p_sc = np.full(m, tiny)
    p_sc[gold.sc] = 1.0
    p_wn = np.full(5, tiny)
    p_wn[gold.wn] = 1.0
    p_wc = np.full(m, tiny)
    for c in gold.wc_cols:
        p_wc[c] = 1.0
    p_wo = np.full((m, 3), tiny)
    for c, o in zip(gold.wc_cols, gold.wo_ops):
        p_wo[c, o] = 1.0
    start = np.full((m, 3, n), -1e9)
    end = np.full((m, 3, n), -1e9)
    for c, o, span in zip(gold.wc_cols, gold.wo_ops, gold.wv_spans):
        s, e = span
        start[c, o, s] = 0.0
        end[c, o, e] = 0.0
    return heads.SlotDistributions(p_sa, p_sc, p_wn, p_wc, p_wo, start, end)


def test_loss_zero_at_perfect_prediction():
    _, _, feats = setup_model()
    gold = feats.gold
    dists = one_hot_distributions(gold, len(feats.tokens), len(SCHEMA.headers))
    total, per_head = heads.loss(dists, gold)
    assert total == pytest.approx(0.0, abs=1e-9)
    assert all(v == pytest.approx(0.0, abs=1e-9) for v in per_head.values())


def test_loss_uniform_sa_is_log6():
    _, _, feats = setup_model()
    gold = feats.gold
    dists = one_hot_distributions(gold, len(feats.tokens), len(SCHEMA.headers))
    dists.p_sa = np.full(6, 1 / 6)
    _, per_head = heads.loss(dists, gold)
    assert per_head["sa"] == pytest.approx(np.log(6), rel=1e-9)


def test_loss_no_conditions_zeroes_wo_wv():
    params, config, feats = setup_model()
    gold = heads.GoldTargets(sa=3, sc=0, wn=0, wc_cols=(), wo_ops=(), wv_spans=())
    logits = heads.forward_tensors(params, config, feats, wn_condition=0)
    total, per_head, missing = heads.loss_tensors(logits, gold)
    assert per_head["wo"] == 0.0 and per_head["wv"] == 0.0
    assert missing == 0
    assert float(total.data) > 0  # other heads still contribute


def test_loss_counts_missing_spans():
    params, config, feats = setup_model()
    gold = heads.GoldTargets(
        sa=0, sc=0, wn=1, wc_cols=(1,), wo_ops=(0,), wv_spans=(None,)
    )
    logits = heads.forward_tensors(params, config, feats, wn_condition=1)
    _, per_head, missing = heads.loss_tensors(logits, gold)
    assert missing == 1
    assert per_head["wv"] == 0.0
    assert per_head["wo"] > 0.0


def test_loss_non_negative_on_random_distributions():
    rng = np.random.default_rng(12)
    _, _, feats = setup_model()
    gold = feats.gold
    from .util import random_distributions

    for _ in range(50):
        dists = random_distributions(rng, len(SCHEMA.headers), len(feats.tokens))
        total, per_head = heads.loss(dists, gold)
        assert total >= 0
        assert all(v >= 0 for v in per_head.values())


def test_grad_check_small_config():
    params, config, feats = setup_model(embed_dim=3, hidden_dim=3, seed=1)
    worst = heads.grad_check(params, config, feats, step=1e-4)
    assert worst < 1e-4


def test_grad_check_negative_control(monkeypatch):
    # Corrupt tanh's backward only; finite differences still see the true
    # function, so the reported error must blow up.
    real_tanh = ad.tanh

    def corrupt_tanh(a):
        out = real_tanh(a)
        real_bwd = out._backward

        def bad_bwd(g):
            real_bwd(g * 1.5)

        out._backward = bad_bwd
        return out

    monkeypatch.setattr(ad, "tanh", corrupt_tanh)
    params, config, feats = setup_model(embed_dim=3, hidden_dim=3, seed=1)
    worst = heads.grad_check(params, config, feats, step=1e-4)
    assert worst > 1e-2


def test_grad_check_step_halving_stays_stable():
    params, config, feats = setup_model(embed_dim=3, hidden_dim=3, seed=3)

    def numeric_one(name, i, step):
        flat = params[name].data.reshape(-1)
        old = flat[i]
        flat[i] = old + step
        logits = heads.forward_tensors(params, config, feats, wn_condition=feats.gold.wn)
        f_plus = float(heads.loss_tensors(logits, feats.gold)[0].data)
        flat[i] = old - step
        logits = heads.forward_tensors(params, config, feats, wn_condition=feats.gold.wn)
        f_minus = float(heads.loss_tensors(logits, feats.gold)[0].data)
        flat[i] = old
        return (f_plus - f_minus) / (2 * step)

    for p in params.values():
        p.grad = None
    logits = heads.forward_tensors(params, config, feats, wn_condition=feats.gold.wn)
    total, _, _ = heads.loss_tensors(logits, feats.gold)
    ad.backward(total)
    name = "sa.out.b"
    analytic = params[name].grad.reshape(-1)
    for i in range(analytic.size):
        err_full = abs(numeric_one(name, i, 1e-4) - analytic[i])
        err_half = abs(numeric_one(name, i, 5e-5) - analytic[i])
        assert err_half <= 10 * err_full + 1e-10


def tiny_corpus(n=8):
    from sqlsketch import synth

    tables = synth.build_tables()
    schemas = {tid: schema for tid, (schema, _) in tables.items()}
    return synth.generate_examples(n, seed=5), schemas


def test_train_zero_epochs_returns_init():
    examples, schemas = tiny_corpus()
    cfg = heads.TrainConfig(embed_dim=5, hidden_dim=5, epochs=0, seed=4)
    result = heads.train(examples, schemas, cfg)
    fresh = heads.init_params(result.config)
    assert set(result.params) == set(fresh)
    assert all(np.array_equal(result.params[k].data, fresh[k].data) for k in fresh)
    assert result.loss_curve == []


def test_train_zero_lr_constant_curve():
    examples, schemas = tiny_corpus(4)
    cfg = heads.TrainConfig(embed_dim=5, hidden_dim=5, epochs=3, lr=0.0, seed=4)
    result = heads.train(examples, schemas, cfg)
    assert len(result.loss_curve) == 3
    assert result.loss_curve[0] == pytest.approx(result.loss_curve[1], rel=1e-12)
    assert result.loss_curve[1] == pytest.approx(result.loss_curve[2], rel=1e-12)


def test_train_reduces_loss():
    examples, schemas = tiny_corpus()
    cfg = heads.TrainConfig(embed_dim=8, hidden_dim=8, epochs=15, lr=0.15,
                            momentum=0.8, seed=4)
    result = heads.train(examples, schemas, cfg)
    assert result.loss_curve[-1] < result.loss_curve[0]


def test_train_is_deterministic():
    examples, schemas = tiny_corpus(4)
    cfg = heads.TrainConfig(embed_dim=5, hidden_dim=5, epochs=2, seed=9)
    r1 = heads.train(examples, schemas, cfg)
    r2 = heads.train(examples, schemas, cfg)
    assert r1.loss_curve == r2.loss_curve
    assert all(np.array_equal(r1.params[k].data, r2.params[k].data) for k in r1.params)


def test_train_aborts_on_non_finite_loss():
    examples, schemas = tiny_corpus(4)
    cfg = heads.TrainConfig(embed_dim=5, hidden_dim=5, epochs=1, seed=4)

    # Poison the initializer output by patching init_params at call site.
    real_init = heads.init_params

    def poisoned(config):
        params = real_init(config)
        params["sa.out.b"].data[0] = np.nan
        return params

    heads.init_params = poisoned
    try:
        with pytest.raises(heads.TrainingError, match="head 'sa'"):
            heads.train(examples, schemas, cfg)
    finally:
        heads.init_params = real_init


def test_checkpoint_round_trip(tmp_path):
    params, config, feats = setup_model()
    vocab = Vocabulary.build([["points", "when", "rank", "is", "2"]])
    path = tmp_path / "model.skcp"
    heads.save_checkpoint(path, params, vocab, config)
    loaded_params, loaded_vocab, loaded_config = heads.load_checkpoint(path)
    assert loaded_config == config
    assert loaded_vocab.to_json() == vocab.to_json()
    assert set(loaded_params) == set(params)
    for k in params:
        expected = params[k].data.astype("<f4").astype(np.float64)
        assert np.array_equal(loaded_params[k].data, expected)


def test_checkpoint_truncation_detected(tmp_path):
    params, config, _ = setup_model()
    vocab = Vocabulary.build([["x"]])
    path = tmp_path / "model.skcp"
    heads.save_checkpoint(path, params, vocab, config)
    blob = path.read_bytes()
    path.write_bytes(blob[:-17])
    with pytest.raises(ValueError, match="truncated"):
        heads.load_checkpoint(path)


def test_predict_produces_valid_query():
    params, config, feats = setup_model(seed=8)
    query, dists = heads.predict(params, config, feats, beam_width=4)
    assert 0 <= query.sel < len(SCHEMA.headers)
    assert len({c.col for c in query.conds}) == len(query.conds)
    for c in query.conds:
        assert c.value  # extracted spans are never empty
