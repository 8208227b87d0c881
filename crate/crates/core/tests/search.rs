use advnet::adversary::{AdversaryModel, ChangeSemantics, Regime};
use advnet::capacity::{
    audit_lemmas, build_confusability, is_unambiguous, max_unambiguous, sweep_schemes,
    SearchBudget, TransferQuery, Unambiguity,
};
use advnet::netmodel::{
    build_diamond, build_family_d, build_mirrored_diamond, build_single_edge, Network,
};
use advnet::schemes::{
    code_diamond_multishot, code_repetition, scheme_compare_flag, scheme_diamond_star, NetworkCode,
    OuterCode, RoundCode,
};
use advnet::{Alphabet, Word};

fn w(s: &[u8]) -> Word {
    Word::new(s.to_vec())
}

fn diamond_query(
    q: usize,
    shots: usize,
    regime: Regime,
    change: Option<ChangeSemantics>,
) -> TransferQuery {
    let a = Alphabet::new(q).unwrap();
    let adv = AdversaryModel::new(vec![0, 1, 2], 1, regime, change).unwrap();
    TransferQuery::new(
        build_diamond(),
        a,
        NetworkCode::uniform(scheme_diamond_star(a), shots),
        adv,
        shots,
    )
    .unwrap()
}

fn all(q: &TransferQuery) -> Vec<Word> {
    q.all_inputs().collect()
}

fn search(q: &TransferQuery) -> usize {
    let out = max_unambiguous(q, all(q), SearchBudget::unlimited()).unwrap();
    assert!(out.exact);
    out.size
}

#[test]
fn one_shot_transfer_set_example() {
    let q = diamond_query(3, 1, Regime::OneShot, None);
    let set = q.transfer_set(&w(&[1, 1, 1])).unwrap();
    let got: Vec<Word> = set.iter().cloned().collect();
    assert_eq!(got, vec![w(&[0, 1]), w(&[1, 1]), w(&[1, 2]), w(&[2, 1])]);
}

#[test]
fn static_attack_on_e2_flags_both_rounds() {
    let q = diamond_query(3, 2, Regime::Static, None)
        .with_adversary(AdversaryModel::new(vec![1], 1, Regime::Static, None).unwrap())
        .unwrap();
    let set = q.transfer_set(&w(&[0, 0, 0, 1, 1, 1])).unwrap();
    let got: Vec<Word> = set.iter().cloned().collect();
    // The clean output comes from the empty edge choice.
    assert_eq!(got, vec![w(&[0, 0, 1, 1]), w(&[0, 2, 1, 2])]);
}

#[test]
fn witness_for_star_codeword() {
    let q = diamond_query(3, 1, Regime::OneShot, None);
    let good = OuterCode::new([w(&[0, 0, 0]), w(&[1, 1, 1])]).unwrap();
    assert!(is_unambiguous(&good, &q).unwrap().is_unambiguous());
    let bad = OuterCode::new([w(&[0, 0, 0]), w(&[1, 1, 1]), w(&[2, 2, 2])]).unwrap();
    match is_unambiguous(&bad, &q).unwrap() {
        Unambiguity::Ambiguous {
            first,
            second,
            output,
            ..
        } => {
            assert_eq!(
                (first, second, output),
                (w(&[0, 0, 0]), w(&[2, 2, 2]), w(&[0, 2]))
            );
        }
        Unambiguity::Unambiguous => panic!("expected a collision"),
    }
}

#[test]
fn one_shot_diamond_fixed_scheme() {
    for q in [3, 4, 5] {
        assert_eq!(search(&diamond_query(q, 1, Regime::OneShot, None)), q - 1);
    }
}

#[test]
fn without_adversary_conflicts_are_clean_collisions() {
    let q = diamond_query(3, 1, Regime::OneShot, None)
        .with_adversary(AdversaryModel::none())
        .unwrap();
    let g = build_confusability(all(&q), &q).unwrap();
    let clean: Vec<Word> = g
        .vertices()
        .iter()
        .map(|x| q.clean_output(x).unwrap())
        .collect();
    for (i, x) in g.vertices().iter().enumerate() {
        assert_eq!(q.transfer_set(x).unwrap().len(), 1);
        for j in i + 1..clean.len() {
            assert_eq!(g.has_edge(i, j), clean[i] == clean[j]);
        }
    }
    let single = build_confusability(vec![w(&[0, 0, 0])], &q).unwrap();
    assert_eq!(single.edge_count(), 0);
}

#[test]
fn static_must_multishot_diamond() {
    let q = diamond_query(3, 2, Regime::Static, None);
    let code = code_diamond_multishot(Alphabet::new(3).unwrap(), 2).unwrap();
    assert_eq!(code.len(), 8);
    assert!(is_unambiguous(&code, &q).unwrap().is_unambiguous());
    assert!(audit_lemmas(&code, &q).unwrap().all_pass());
    let out = max_unambiguous(&q, all(&q), SearchBudget::unlimited()).unwrap();
    assert_eq!(out.size, 8);
    let audit = audit_lemmas(&out.code, &q).unwrap();
    assert!(audit.all_pass(), "{audit:?}");
}

#[test]
fn adaptive_multishot_diamond() {
    let q = diamond_query(3, 2, Regime::Adaptive, None);
    assert_eq!(search(&q), 4);
    let a = Alphabet::new(3).unwrap();
    let rep = code_repetition(a, q.network(), 2, true).unwrap();
    assert_eq!(rep.len(), 4);
    assert!(is_unambiguous(&rep, &q).unwrap().is_unambiguous());
    let eight = code_diamond_multishot(a, 2).unwrap();
    assert!(!is_unambiguous(&eight, &q).unwrap().is_unambiguous());
}

#[test]
fn static_may_is_no_larger_than_must() {
    let must = search(&diamond_query(
        3,
        2,
        Regime::Static,
        Some(ChangeSemantics::MustChange),
    ));
    let may = search(&diamond_query(
        3,
        2,
        Regime::Static,
        Some(ChangeSemantics::MayChange),
    ));
    assert!(may <= must, "may {may} must {must}");
}

fn mirrored_query(
    q: usize,
    shots: usize,
    regime: Regime,
    change: Option<ChangeSemantics>,
) -> TransferQuery {
    let a = Alphabet::new(q).unwrap();
    let n = build_mirrored_diamond();
    let scheme = scheme_compare_flag(a, &n);
    let adv = AdversaryModel::new(vec![0, 1, 2, 3], 1, regime, change).unwrap();
    TransferQuery::new(n, a, NetworkCode::uniform(scheme, shots), adv, shots).unwrap()
}

#[test]
fn one_shot_mirrored() {
    for q in [2, 3] {
        let query = mirrored_query(q, 1, Regime::OneShot, None);
        let rep = code_repetition(Alphabet::new(q).unwrap(), query.network(), 1, false).unwrap();
        assert!(is_unambiguous(&rep, &query).unwrap().is_unambiguous());
        assert_eq!(search(&query), q);
    }
}

#[test]
fn multishot_mirrored_both_semantics() {
    for change in [ChangeSemantics::MustChange, ChangeSemantics::MayChange] {
        let query = mirrored_query(2, 2, Regime::Static, Some(change));
        let rep = code_repetition(Alphabet::new(2).unwrap(), query.network(), 2, false).unwrap();
        assert_eq!(rep.len(), 4);
        assert!(is_unambiguous(&rep, &query).unwrap().is_unambiguous());
        assert_eq!(search(&query), 4, "{change}");
    }
}

#[test]
fn family_d_repetition() {
    let n = build_family_d(2).unwrap();
    let a = Alphabet::new(2).unwrap();
    for shots in [1, 2] {
        let regime = if shots == 1 {
            Regime::OneShot
        } else {
            Regime::Static
        };
        let adv = AdversaryModel::new(0..8, 2, regime, None).unwrap();
        let scheme = scheme_compare_flag(a, &n);
        let q = TransferQuery::new(
            n.clone(),
            a,
            NetworkCode::uniform(scheme, shots),
            adv,
            shots,
        )
        .unwrap();
        let rep = code_repetition(a, &n, shots, false).unwrap();
        assert_eq!(rep.len(), 1 << shots);
        assert!(is_unambiguous(&rep, &q).unwrap().is_unambiguous());
    }
}

#[test]
fn sweep_q2_and_trivial_network() {
    let a = Alphabet::new(2).unwrap();
    let adv = AdversaryModel::new(vec![0, 1, 2], 1, Regime::OneShot, None).unwrap();
    let out = sweep_schemes(
        &build_diamond(),
        a,
        &adv,
        1,
        None,
        None,
        SearchBudget::unlimited(),
    )
    .unwrap();
    assert_eq!(out.best_size, 1);
    assert_eq!(out.schemes_checked, 64);

    let n: Network = build_single_edge();
    let out = sweep_schemes(
        &n,
        a,
        &AdversaryModel::none(),
        1,
        None,
        None,
        SearchBudget::unlimited(),
    )
    .unwrap();
    assert_eq!(out.best_size, 2);
    assert_eq!(out.scheme, RoundCode::new([]));
}

#[test]
#[ignore = "exhaustive q=3 sweep; exercised by the acceptance suite"]
fn sweep_q3() {
    let a = Alphabet::new(3).unwrap();
    let adv = AdversaryModel::new(vec![0, 1, 2], 1, Regime::OneShot, None).unwrap();
    let t = std::time::Instant::now();
    let out = sweep_schemes(
        &build_diamond(),
        a,
        &adv,
        1,
        None,
        None,
        SearchBudget::unlimited(),
    )
    .unwrap();
    eprintln!("{:?} {:?}", out, t.elapsed());
    assert_eq!(out.best_size, 2);
    assert_eq!(out.schemes_checked, 531_441);
}
