use num_bigint::BigInt;
use num_rational::BigRational;

use super::*;
use crate::acg::build_compatibility;
use crate::automata::UNBOUNDED;
use crate::fo::DEFAULT_BUDGET;
use crate::groups::{make_int_group, IntLayout};

fn w(s: &str) -> Word {
    Word::from(s)
}

fn int_acg() -> Acg {
    Acg::linear(make_int_group(), &[1]).unwrap()
}

fn constant(v: i64) -> Asm {
    let acg = int_acg();
    let c = acg.group().encode_int(v).unwrap();
    Asm::constant(acg, &c).unwrap()
}

fn forbidden(s: &str) -> Asm {
    Asm::forbidden_word(&w(s), DEFAULT_BUDGET).unwrap()
}

fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

/// Brute-force membership in the success language.
fn in_success_language(asm: &Asm, sigma: &Word) -> bool {
    let d = asm.capital(sigma).unwrap().unwrap();
    (0..sigma.len()).all(|i| asm.capital(&sigma.prefix(i)).unwrap().unwrap() < d)
}

#[test]
fn constant_asm() {
    let d = constant(3);
    assert!(verify_fairness(&d, DEFAULT_BUDGET, 8).unwrap().holds);
    assert!(verify_nonneg(&d, DEFAULT_BUDGET, 8).unwrap().holds);
    assert_eq!(capital_trace(&d, &w("0110")).unwrap(), ints(&[3; 5]));
    let lang = success_language(&d, DEFAULT_BUDGET).unwrap();
    assert_eq!(lang, AutomaticRelation::singleton(&[Word::new()]));
    assert!(!succeeds_on_up(&d, &w(""), &w("1"), DEFAULT_BUDGET).unwrap().succeeded);
    assert!(verify_nonneg(&constant(0), DEFAULT_BUDGET, 8).unwrap().holds);
}

#[test]
fn negative_constant_fails_sign_check() {
    let v = verify_nonneg(&constant(-2), DEFAULT_BUDGET, 8).unwrap();
    assert!(!v.holds);
    assert_eq!(v.method, Method::Automaton);
}

#[test]
fn forbidden_double_zero_is_a_supermartingale() {
    let d = forbidden("00");
    let fair = verify_fairness(&d, DEFAULT_BUDGET, 10).unwrap();
    assert!(fair.holds, "{fair}");
    assert_eq!(fair.method, Method::Automaton);
    assert_eq!(check_fairness_bounded(&d, 10).unwrap(), None);
    assert!(verify_nonneg(&d, DEFAULT_BUDGET, 10).unwrap().holds);
}

#[test]
fn lowered_root_breaks_fairness() {
    let d = forbidden("00");
    let lay = IntLayout::separated(6);
    let old = AutomaticRelation::singleton(&[Word::new(), lay.encode(&32.into())]);
    let new = AutomaticRelation::singleton(&[Word::new(), lay.encode(&20.into())]);
    let graph = d.graph().difference(&old).unwrap().union(&new).unwrap();
    let bad = Asm::new(d.acg().clone(), graph, None).unwrap();
    let v = verify_fairness(&bad, DEFAULT_BUDGET, 10).unwrap();
    assert!(!v.holds);
    assert_eq!(v.witness, Some(Word::new()));
    assert_eq!(check_fairness_bounded(&bad, 4).unwrap(), Some(Word::new()));
}

#[test]
fn forbidden_traces() {
    let d = forbidden("00");
    let t = capital_trace(&d, &w("111111")).unwrap();
    assert_eq!((t[0].clone(), t[6].clone()), (32.into(), 64.into()));
    let t = capital_trace(&d, &w("001111")).unwrap();
    assert!(t[2..].iter().all(|v| *v == BigInt::from(0)));
    let one = forbidden("1");
    assert_eq!(capital_trace(&one, &w("0000")).unwrap(), ints(&[1, 2, 4, 8, 16]));
}

#[test]
fn graphs_match_evaluators() {
    for s in ["1", "00", "01"] {
        let d = forbidden(s);
        for sigma in Word::all_up_to(10) {
            assert_eq!(d.graph_capital(&sigma).unwrap(), d.capital(&sigma).unwrap(), "{s} {sigma}");
        }
    }
}

#[test]
fn success_language_matches_definition() {
    for s in ["1", "00"] {
        let d = forbidden(s);
        let lang = success_language(&d, DEFAULT_BUDGET).unwrap();
        for sigma in Word::all_up_to(10) {
            assert_eq!(lang.accepts(std::slice::from_ref(&sigma)).unwrap(), in_success_language(&d, &sigma), "{s} {sigma}");
        }
    }
    let one = forbidden("1");
    let lang = success_language(&one, DEFAULT_BUDGET).unwrap();
    for n in 0..12 {
        assert!(lang.accepts(&[Word::from_bits(vec![0; n])]).unwrap());
    }
}

#[test]
fn success_on_periodic_sequences() {
    let d = forbidden("00");
    let lang = success_language(&d, DEFAULT_BUDGET).unwrap();
    let win = ultimately_periodic_success(&lang, &w(""), &w("1")).unwrap();
    assert!(win.succeeded, "{win}");
    let lose = ultimately_periodic_success(&lang, &w(""), &w("00")).unwrap();
    assert!(!lose.succeeded, "{lose}");
    assert!(ultimately_periodic_success(&lang, &w(""), &w("")).is_err());
}

#[test]
fn sum_with_zero() {
    let d = forbidden("1");
    let zero = {
        let acg = d.acg().clone();
        let c = acg.group().identity().to_vec();
        Asm::constant(acg, &c).unwrap()
    };
    let (r_eq, r_lt) = build_compatibility(d.acg(), zero.acg(), DEFAULT_BUDGET).unwrap();
    let sum = asm_sum(&d, &zero, &r_eq, &r_lt, DEFAULT_BUDGET).unwrap();
    for sigma in Word::all_up_to(8) {
        assert_eq!(sum.graph_capital(&sigma).unwrap(), d.capital(&sigma).unwrap());
    }
}

#[test]
fn sum_of_opposite_bets() {
    let (a, b) = (forbidden("0"), forbidden("1"));
    let (r_eq, r_lt) = build_compatibility(a.acg(), b.acg(), DEFAULT_BUDGET).unwrap();
    let sum = asm_sum(&a, &b, &r_eq, &r_lt, DEFAULT_BUDGET).unwrap();
    for sigma in Word::all_up_to(8) {
        let expect = a.capital(&sigma).unwrap().unwrap() + b.capital(&sigma).unwrap().unwrap();
        assert_eq!(sum.graph_capital(&sigma).unwrap(), Some(expect.clone()));
        assert_eq!(sum.capital(&sigma).unwrap(), Some(expect));
    }
    let fair = verify_fairness(&sum, DEFAULT_BUDGET, 8).unwrap();
    assert!(fair.holds, "{fair}");
}

#[test]
fn sum_rejects_wrong_relations() {
    let (a, b) = (forbidden("0"), forbidden("1"));
    let (r_eq, r_lt) = build_compatibility(a.acg(), b.acg(), DEFAULT_BUDGET).unwrap();
    let swapped = r_lt.reorder(&[1, 0]).unwrap();
    assert!(matches!(
        asm_sum(&a, &b, &r_eq, &swapped, DEFAULT_BUDGET),
        Err(Error::Incompatible(_))
    ));
}

fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(p.into(), q.into())
}

fn mixed_fsg() -> Fsg {
    Fsg::new(vec![[1, 2], [2, 0], [0, 1]], vec![rat(1, 3), rat(2, 3), rat(1, 2)], 0, rat(1, 1)).unwrap()
}

#[test]
fn fsg_capital_examples() {
    let fair = Fsg::constant_bet(rat(1, 2), rat(5, 1)).unwrap();
    for x in Word::all_up_to(6) {
        assert_eq!(fsg_capital(&fair, &x), rat(5, 1));
    }
    let bold = Fsg::constant_bet(rat(1, 1), rat(1, 1)).unwrap();
    assert_eq!(fsg_capital(&bold, &w("1111")), rat(16, 1));
    assert_eq!(fsg_capital(&bold, &w("1101")), rat(0, 1));
    assert_eq!(fsg_capital(&bold, &Word::new()), rat(1, 1));
    assert_eq!(mixed_fsg().modulus(), 6);
    assert_eq!(bold.modulus(), 2);
}

#[test]
fn fsg_step_for_fair_and_bold_gamblers() {
    let fair = fsg_step_function(&Fsg::constant_bet(rat(1, 2), rat(1, 1)).unwrap(), DEFAULT_BUDGET).unwrap();
    let bold = fsg_step_function(&Fsg::constant_bet(rat(1, 1), rat(1, 1)).unwrap(), DEFAULT_BUDGET).unwrap();
    for c in [rat(0, 1), rat(1, 1), rat(3, 4), rat(-5, 2), rat(7, 8)] {
        assert_eq!(fair.apply(&w("10"), &c).unwrap(), Some(c.clone()));
        assert_eq!(bold.apply(&w("1"), &c).unwrap(), Some(&c * rat(2, 1)));
        assert_eq!(bold.apply(&w("0"), &c).unwrap(), Some(rat(0, 1)));
    }
    assert_eq!(bold.apply(&Word::new(), &rat(1, 1)).unwrap(), None);
}

#[test]
fn fsg_step_iterates_to_capital() {
    let g = mixed_fsg();
    let step = fsg_step_function(&g, DEFAULT_BUDGET).unwrap();
    assert_eq!(step.kind(), &crate::groups::GroupKind::Madic(6));
    for x in Word::all_up_to(10) {
        let trace = step.iterate(&x, g.initial_capital()).unwrap();
        assert_eq!(trace, fsg_capitals(&g, &x), "{x}");
    }
}

#[test]
fn fsg_parse_round_trip() {
    let text = "# three states\nstate a bet 1/3\nstate b bet 2/3\nstate c bet 1/2\n\
                trans a 0 b\ntrans a 1 c\ntrans b 0 c\ntrans b 1 a\ntrans c 0 a\ntrans c 1 b\n\
                initial a\ncapital 1\n";
    let g = Fsg::parse(text).unwrap();
    assert_eq!(Fsg::parse(&g.to_string()).unwrap(), g);
    for x in Word::all_up_to(6) {
        assert_eq!(fsg_capital(&g, &x), fsg_capital(&mixed_fsg(), &x));
    }
    let err = Fsg::parse("state a bet 1/2\ntrans a 2 a\n").unwrap_err();
    assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
    assert!(Fsg::parse("state a bet 3/2\ntrans a 0 a\ntrans a 1 a\ninitial a\ncapital 1\n").is_err());
}

#[test]
fn unbounded_budget_is_accepted() {
    assert!(Asm::forbidden_word(&w("1"), UNBOUNDED).is_ok());
}
