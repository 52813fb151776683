use proptest::prelude::*;
use qgram::catalog;
use qgram::freealg::{Expr, Letter, Sign, Word};
use qgram::grammar::{Order, Priority};
use qgram::json::{from_json, to_json};
use qgram::qpoly::QPoly;
use qgram::symbol::Symbol;

fn masters() -> Vec<Symbol> {
    vec![Symbol::new("x"), Symbol::new("y")]
}

fn arb_word(max_len: usize) -> impl Strategy<Value = Word> {
    let letter = (prop::sample::select(masters()), 0u32..=3, any::<bool>())
        .prop_map(|(m, i, inv)| Letter::new(m, i, if inv { Sign::Inv } else { Sign::Pos }));
    prop::collection::vec(letter, 0..=max_len).prop_map(Word::from_letters)
}

fn arb_expr() -> impl Strategy<Value = Expr> {
    let coef = (-3i64..=3, 0i32..=3).prop_map(|(c, k)| &QPoly::constant(c) * &QPoly::q_pow(k));
    prop::collection::vec((coef, arb_word(4)), 0..=4).prop_map(|ts| ts.into_iter().map(|(c, w)| Expr::term(c, w)).sum())
}

fn arb_order() -> impl Strategy<Value = Order> {
    prop::sample::select(vec![Order::Kso, Order::Lpo, Order::Aio, Order::Dio])
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 128, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn ring_laws(a in arb_expr(), b in arb_expr(), c in arb_expr()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a + &b) - &b, a.clone());
        prop_assert_eq!(&a * &Expr::one(), a);
    }

    #[test]
    fn words_cancel_against_inverses(w in arb_word(6)) {
        prop_assert_eq!(&Expr::from(w.clone()) * &Expr::from(w.inverse()), Expr::one());
    }

    #[test]
    fn evaluation_is_multiplicative(a in arb_expr(), b in arb_expr(), idx in 0usize..13) {
        let ent = &catalog::entries()[idx];
        if ent.grammar.masters().len() == 2 && ent.grammar.masters().iter().all(|m| masters().contains(m)) {
            let phi = &ent.eval;
            prop_assert_eq!(phi.evaluate(&(&a * &b)).unwrap(), &phi.evaluate(&a).unwrap() * &phi.evaluate(&b).unwrap());
        }
    }

    #[test]
    fn orders_are_invisible_after_evaluation(a in arb_expr(), ord in arb_order()) {
        let phi = &catalog::get("G_inv").unwrap().eval;
        let pr = Priority::new(&masters());
        prop_assert_eq!(phi.evaluate(&ord.apply(&pr, &a)).unwrap(), phi.evaluate(&a).unwrap());
    }

    #[test]
    fn orders_are_idempotent(a in arb_expr(), ord in arb_order()) {
        let pr = Priority::new(&masters());
        let once = ord.apply(&pr, &a);
        prop_assert_eq!(ord.apply(&pr, &once), once);
    }

    #[test]
    fn text_and_json_round_trip(a in arb_expr()) {
        let text = a.to_string();
        prop_assert_eq!(text.parse::<Expr>().unwrap(), a.clone());
        let json = to_json(&a);
        let back: Expr = from_json(&json).unwrap();
        prop_assert_eq!(to_json(&back), json);
        prop_assert_eq!(back, a);
    }
}
