"""Smoke test for the ptkit extension module.

Build and run from the repository root:

    cargo build --release -p ptkit-python --features extension-module
    cp target/release/libptkit.so crates/python/python/ptkit.so
    python3 crates/python/python/smoke_test.py
"""

import ptkit


def main():
    assert ptkit.pkn(6, 6) == 923
    assert ptkit.pkn_stirling(3, 3) == 19

    a2 = ptkit.gen_ak(2)
    assert a2.depth() == 2
    assert a2.is_partially_ordered()
    assert sorted(a2.run([])) == ["0", "1", "2"]
    assert a2.accepts([]) and not a2.accepts(["a2", "a2"])

    m = a2.minimize()
    assert m.num_states == 8 and m.depth() == 7
    assert ptkit.Automaton.parse(m.to_str()) == m

    assert a2.is_pt()
    assert a2.min_k() == ("exact", 3, 3)
    assert a2.is_kpt(3) is True and a2.is_kpt(2) is False
    w1, w2 = a2.witness(2)
    assert ptkit.k_equivalent(w1, w2, 2)
    assert a2.verify(2, w1, w2)
    assert a2.witness(3) is None

    wk = ptkit.gen_wk(1)
    assert wk == ["a0", "a1", "a0"]
    assert ptkit.embeds(["a", "c"], ["a", "b", "c"])
    assert not ptkit.k_equivalent(["a", "b"], ["b", "a"], 2)
    assert ptkit.subwords(["a", "b"], ["a", "b"], 2) == [[], ["a"], ["b"], ["a", "b"]]
    assert len(ptkit.gen_wkn(2, 2)) == ptkit.pkn(2, 2)

    cap = ptkit.gen_intersection_nfa(["x", "y", "z"])
    assert cap.num_states == 8 and cap.depth() == 3
    assert cap.min_k()[1] == 1
    print(cap.decompose(1))

    try:
        ptkit.canonical_automaton(4, 4, budget=10)
    except ptkit.BudgetExceeded:
        pass
    else:
        raise AssertionError("budget not enforced")

    print("python smoke test: ok")


if __name__ == "__main__":
    main()
