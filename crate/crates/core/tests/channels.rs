use advnet::adversary::{AdversaryModel, Regime};
use advnet::capacity::{
    adversarial_channel, audit_lemmas, max_code_for_channel, pigeonhole_check,
    superadditivity_check, PigeonholeVariant, TransferQuery,
};
use advnet::chanalg::{ball_outputs_disjoint, blockwise_distinguishable, power};
use advnet::netmodel::build_diamond;
use advnet::schemes::{scheme_diamond_star, NetworkCode, OuterCode};
use advnet::{Alphabet, Error, Word};

#[test]
fn blockwise_criterion_matches_ball_disjointness() {
    for q in [2, 3] {
        let a = Alphabet::new(q).unwrap();
        for (width, shots) in [(3, 1), (3, 2), (4, 1)] {
            let variant = if width == 3 {
                PigeonholeVariant::Diamond
            } else {
                PigeonholeVariant::Mirrored
            };
            let h = power(&adversarial_channel(a, variant).unwrap(), shots)
                .unwrap()
                .memoized();
            let words: Vec<Word> = a.words(width * shots).collect();
            for x in &words {
                for y in words.iter().filter(|y| *y > x) {
                    assert_eq!(
                        blockwise_distinguishable(x, y, width),
                        ball_outputs_disjoint(&h, x, y).unwrap(),
                        "{x} {y}"
                    );
                }
            }
        }
    }
}

#[test]
fn pigeonhole_examples() {
    let two = Alphabet::new(2).unwrap();
    let three = Alphabet::new(3).unwrap();
    let m = pigeonhole_check(two, 1, PigeonholeVariant::Mirrored).unwrap();
    assert_eq!((m.max_size, m.excluded, m.confirmed), (2, 3, true));
    let d = pigeonhole_check(three, 1, PigeonholeVariant::Diamond).unwrap();
    assert_eq!((d.max_size, d.excluded, d.confirmed), (2, 3, true));
    let d2 = pigeonhole_check(two, 1, PigeonholeVariant::Diamond).unwrap();
    assert!(d2.confirmed);
    assert!(matches!(
        pigeonhole_check(Alphabet::new(4).unwrap(), 3, PigeonholeVariant::Mirrored),
        Err(Error::TooLarge(_))
    ));
}

#[test]
fn superadditivity_examples() {
    let a = Alphabet::new(2).unwrap();
    for v in [PigeonholeVariant::Diamond, PigeonholeVariant::Mirrored] {
        let h = adversarial_channel(a, v).unwrap();
        let out = superadditivity_check(&h, 2).unwrap();
        assert_eq!(out.single, 2);
        assert!(out.power >= 4 && out.holds, "{out:?}");
        assert!(superadditivity_check(&h, 1).unwrap().holds);
    }
    let (size, witness) =
        max_code_for_channel(&adversarial_channel(a, PigeonholeVariant::Diamond).unwrap()).unwrap();
    assert_eq!(size, witness.len());
}

fn one_shot_query(q: usize) -> TransferQuery {
    let a = Alphabet::new(q).unwrap();
    TransferQuery::new(
        build_diamond(),
        a,
        NetworkCode::uniform(scheme_diamond_star(a), 1),
        AdversaryModel::new(0..3, 1, Regime::OneShot, None).unwrap(),
        1,
    )
    .unwrap()
}

#[test]
fn audits_on_small_codes() {
    let q = one_shot_query(3);
    let code = OuterCode::new([Word::new(vec![0, 0, 0]), Word::new(vec![1, 1, 1])]).unwrap();
    let audit = audit_lemmas(&code, &q).unwrap();
    assert!(audit.all_pass());
    assert_eq!((audit.inequality_lhs, audit.inequality_rhs), (5, 9));

    let single = OuterCode::new([Word::new(vec![2, 0, 1])]).unwrap();
    assert!(audit_lemmas(&single, &q).unwrap().all_pass());

    let bad = OuterCode::new([Word::new(vec![0, 0, 0]), Word::new(vec![2, 2, 2])]).unwrap();
    assert!(matches!(
        audit_lemmas(&bad, &q),
        Err(Error::AuditRefused(..))
    ));
}
