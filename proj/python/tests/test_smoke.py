import pytest

import cryptacc


def test_registry():
    assert cryptacc.scheme_names() == ["bloom", "cuckoo", "rsa", "clrsab", "merkle", "async"]
    assert cryptacc.scheme("merkle").strong
    assert cryptacc.scheme("clrsab").update_model == "partially-asynchronous"


@pytest.mark.parametrize("name", ["rsa", "clrsab", "merkle", "async"])
def test_holder_round_trip(name):
    s = cryptacc.scheme(name)
    key = s.gen(seed=3)
    state = s.eval(key, [])
    held = {}
    for e in [b"alice", b"bob", "carol"]:
        w, broadcasts = s.add(key, state, e)
        for b in broadcasts:
            held = {k: s.apply(key, v, b)[0] for k, v in held.items()}
        held[e] = w
    for b in s.remove(key, state, b"bob"):
        held = {k: s.apply(key, v, b)[0] for k, v in held.items() if k != b"bob"}
    held.pop(b"bob", None)
    for e, w in held.items():
        assert s.ver(key, state.value, e, w)
    assert s.wit(key, b"bob", state) is None
    assert not s.ver(key, state.value, b"bob", held[b"alice"])


def test_eval_order_independent():
    s = cryptacc.scheme("merkle")
    key = s.gen()
    assert s.eval(key, [b"x", b"y", b"z"]).value == s.eval(key, [b"z", b"x", b"y"]).value


def test_encodings_round_trip():
    s = cryptacc.scheme("rsa")
    key = s.gen(seed=9)
    state = s.eval(key, [b"a", b"b"])
    w = s.wit(key, b"a", state)
    assert cryptacc.Key.decode(key.encode()) == key
    assert cryptacc.Witness.decode(w.encode()) == w
    again = cryptacc.State.decode(state.encode())
    assert s.ver(key, again.value, b"a", w)


def test_universal_rsa():
    s = cryptacc.scheme("rsa")
    key = s.gen(seed=4)
    state = s.eval(key, [b"a", b"b"])
    nw = s.nonmem_wit(key, b"q", state)
    assert nw.nonmember
    assert s.ver(key, state.value, b"q", nw)
    assert s.nonmem_wit(key, b"a", state) is None


def test_errors_carry_codes():
    s = cryptacc.scheme("bloom")
    key = s.gen(threshold=4)
    state = s.eval(key, [b"a"])
    with pytest.raises(cryptacc.AccumulatorError) as info:
        s.remove(key, state, b"a")
    assert info.value.code == "scheme-unsupported-operation"
    with pytest.raises(cryptacc.AccumulatorError):
        cryptacc.scheme("nope")
    with pytest.raises(cryptacc.AccumulatorError):
        cryptacc.scheme("rsa").gen(lambda_=64)


def test_filters_and_sim():
    assert abs(cryptacc.bloom_fpr_estimate(9585, 7, 1000) - 0.010042) < 1e-5
    r = cryptacc.measure_bloom_fpr(4096, 4, 500, probes=20000, seed=2)
    assert r["within_3se"]
    assert cryptacc.simulate("clrsab", 100, 10, seed=7)["broadcasts"] == 10
    assert cryptacc.simulate("rsa", 100, 10, seed=7)["broadcasts"] == 110
    ns = [2.0**e for e in range(6, 12)]
    assert cryptacc.fit_complexity(ns, [5.0] * len(ns)) == "constant"


def test_bench_rows():
    rows = cryptacc.bench("merkle", [64, 128, 256, 512], min_batch_ns=1e5)
    assert [r["n"] for r in rows] == [64, 128, 256, 512]
    assert cryptacc.fit_complexity([r["n"] for r in rows], [r["witness_bytes"] for r in rows]) == "logarithmic"
