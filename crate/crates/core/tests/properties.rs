use std::collections::BTreeSet;

use advnet::adversary::{AdversaryModel, ChangeSemantics, Regime};
use advnet::capacity::TransferQuery;
use advnet::chanalg::{
    concatenate, hamming_ball, hamming_ball_channel, power, product, ChannelMap,
};
use advnet::netmodel::{
    build_diamond, build_mirrored_diamond, edge_order, enumerate_min_cuts, is_cut, precedes,
    validate_network, Network,
};
use advnet::schemes::{scheme_compare_flag, scheme_diamond_star, NetworkCode, RoundCode};
use advnet::{Alphabet, Word, WordSet};
use proptest::prelude::*;

fn word(q: usize, len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(0..q as u8, len).prop_map(Word::new)
}

/// Random DAG on `0..v` with edges only from lower to higher ids; vertex 0
/// is the source and `v - 1` the terminal.
fn dag() -> impl Strategy<Value = Network> {
    (3usize..7).prop_flat_map(|v| {
        let pairs: Vec<(usize, usize)> = (0..v)
            .flat_map(|a| (a + 1..v).map(move |b| (a, b)))
            .collect();
        prop::collection::vec(prop::sample::select(pairs), 2..12)
            .prop_map(move |edges| Network::from_edges("random", v, &edges, 0, &[v - 1]).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ball_is_symmetric(q in 2usize..4, x in word(3, 4), y in word(3, 4)) {
        let a = Alphabet::new(q).unwrap();
        let x = Word::new(x.symbols().iter().map(|&s| s % q as u8).collect());
        let y = Word::new(y.symbols().iter().map(|&s| s % q as u8).collect());
        let bx = hamming_ball(a, &x, 1);
        prop_assert_eq!(bx.len(), 1 + 4 * (q - 1));
        prop_assert_eq!(bx.contains(&y), hamming_ball(a, &y, 1).contains(&x));
    }

    #[test]
    fn channel_laws(q in 2usize..4, n in 1usize..3, r in 0usize..2, x in word(2, 6)) {
        let a = Alphabet::new(q).unwrap();
        let h = hamming_ball_channel(a, n, r).unwrap();
        let id = ChannelMap::identity(a, n);
        let x1 = Word::new(x.symbols()[..n].to_vec());
        prop_assert_eq!(concatenate(&h, &id).unwrap().apply(&x1).unwrap(), h.apply(&x1).unwrap());
        prop_assert_eq!(concatenate(&id, &h).unwrap().apply(&x1).unwrap(), h.apply(&x1).unwrap());
        let x2 = Word::new(x.symbols()[..2 * n].to_vec());
        prop_assert_eq!(
            power(&h, 2).unwrap().apply(&x2).unwrap(),
            product(&h, &h).unwrap().apply(&x2).unwrap()
        );
        let x3 = Word::new(x.symbols()[..3 * n].to_vec());
        let left = product(&product(&h, &id).unwrap(), &h).unwrap();
        let right = product(&h, &product(&id, &h).unwrap()).unwrap();
        prop_assert_eq!(left.apply(&x3).unwrap(), right.apply(&x3).unwrap());
    }

    #[test]
    fn random_dags_validate_and_are_canonical(n in dag()) {
        let order = edge_order(&n).unwrap();
        prop_assert_eq!(order, (0..n.edges().len()).collect::<Vec<_>>());
        // Every edge precedes the edges leaving its head.
        for e in n.edges() {
            for &f in n.out_edges(e.head) {
                prop_assert!(e.id < f);
            }
        }
        let violations = validate_network(&n);
        let unreachable = is_cut(&n, &[], n.terminals()[0]);
        prop_assert!(!unreachable || !violations.is_empty());
    }

    #[test]
    fn min_cuts_match_brute_force(n in dag()) {
        let t = n.terminals()[0];
        prop_assume!(!is_cut(&n, &[], t));
        let m = n.edges().len();
        let cuts: BTreeSet<Vec<usize>> = enumerate_min_cuts(&n, t)
            .unwrap()
            .into_iter()
            .map(|c| c.edges)
            .collect();
        let all: Vec<Vec<usize>> = (0u32..1 << m)
            .map(|mask| (0..m).filter(|i| mask >> i & 1 == 1).collect::<Vec<_>>())
            .filter(|s| is_cut(&n, s, t))
            .collect();
        let minimal: BTreeSet<Vec<usize>> = all
            .iter()
            .filter(|s| (0..s.len()).all(|k| {
                let mut smaller = s.to_vec();
                smaller.remove(k);
                !is_cut(&n, &smaller, t)
            }))
            .cloned()
            .collect();
        prop_assert_eq!(cuts, minimal);
    }

    #[test]
    fn source_edges_precede_terminal_edges(n in dag()) {
        let t = n.terminals()[0];
        let out = n.out_edges(n.source()).to_vec();
        let inc = n.in_edges(t).to_vec();
        prop_assume!(!out.is_empty() && !inc.is_empty());
        prop_assert!(precedes(&n, &out, &inc).unwrap());
    }

    #[test]
    fn may_change_actions_include_must_change(
        q in 2usize..4,
        shots in 1usize..3,
        budget in 0usize..3,
        adaptive in any::<bool>(),
        sent in prop::collection::vec(prop::collection::vec(0u8..3, 3), 2),
    ) {
        let a = Alphabet::new(q).unwrap();
        let sent: Vec<Vec<u8>> = sent.into_iter().map(|r| r.into_iter().map(|s| s % q as u8).collect()).collect();
        let regime = if adaptive { Regime::Adaptive } else { Regime::Static };
        let must = AdversaryModel::new(0..3, budget, regime, Some(ChangeSemantics::MustChange)).unwrap();
        let may = must.clone().with_change(ChangeSemantics::MayChange);
        let must_set: BTreeSet<_> = must.enumerate_actions(a, shots, &sent).collect();
        let may_set: BTreeSet<_> = may.enumerate_actions(a, shots, &sent).collect();
        prop_assert!(must_set.is_subset(&may_set));
        for action in &may_set {
            prop_assert!(may.is_admissible(action, &sent));
        }
    }
}

/// Network simulation agrees with `H ▶ F`: the one-substitution ball on the
/// source word followed by the deterministic scheme map.
fn check_oracle(n: Network, scheme: RoundCode, q: usize) {
    let a = Alphabet::new(q).unwrap();
    let width = n.outdegree(n.source());
    let adv =
        AdversaryModel::new(n.out_edges(n.source()).to_vec(), 1, Regime::OneShot, None).unwrap();
    let attacked = TransferQuery::new(
        n.clone(),
        a,
        NetworkCode::uniform(scheme.clone(), 1),
        adv,
        1,
    )
    .unwrap();
    let clean = TransferQuery::new(
        n,
        a,
        NetworkCode::uniform(scheme, 1),
        AdversaryModel::none(),
        1,
    )
    .unwrap();
    let out_len = clean
        .clean_output(&Word::new(vec![0; width]))
        .unwrap()
        .len();
    let f = ChannelMap::deterministic(a, width, out_len, move |x| clean.clean_output(x).unwrap());
    let oracle = concatenate(&hamming_ball_channel(a, width, 1).unwrap(), &f).unwrap();
    for x in a.words(width) {
        assert_eq!(
            attacked.transfer_set(&x).unwrap(),
            oracle.apply(&x).unwrap(),
            "at {x}"
        );
    }
}

#[test]
fn diamond_simulation_matches_channel_oracle() {
    for q in [2, 3] {
        check_oracle(
            build_diamond(),
            scheme_diamond_star(Alphabet::new(q).unwrap()),
            q,
        );
    }
}

#[test]
fn mirrored_simulation_matches_channel_oracle() {
    for q in [2, 3] {
        let n = build_mirrored_diamond();
        let scheme = scheme_compare_flag(Alphabet::new(q).unwrap(), &n);
        check_oracle(n, scheme, q);
    }
}

#[test]
fn adaptive_sets_are_products_of_one_shot_sets() {
    let a = Alphabet::new(3).unwrap();
    let n = build_diamond();
    let scheme = scheme_diamond_star(a);
    let one = TransferQuery::new(
        n.clone(),
        a,
        NetworkCode::uniform(scheme.clone(), 1),
        AdversaryModel::new(0..3, 1, Regime::OneShot, None).unwrap(),
        1,
    )
    .unwrap();
    let two = TransferQuery::new(
        n,
        a,
        NetworkCode::uniform(scheme, 2),
        AdversaryModel::new(0..3, 1, Regime::Adaptive, None).unwrap(),
        2,
    )
    .unwrap();
    for x in a.words(6) {
        let first = one.transfer_set(&x.block(0, 3).unwrap()).unwrap();
        let second = one.transfer_set(&x.block(1, 3).unwrap()).unwrap();
        let expected: WordSet = first
            .iter()
            .flat_map(|l| second.iter().map(move |r| l.concat(r)))
            .collect();
        assert_eq!(two.transfer_set(&x).unwrap(), expected, "at {x}");
    }
}
