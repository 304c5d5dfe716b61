use super::*;
use crate::surface_group::SurfaceWord;
use proptest::prelude::*;

fn sym(text: &str, genus: u32, level: usize) -> BasisSymbol {
    BasisSymbol::parse(text, genus, level).unwrap()
}

fn fw(text: &str, genus: u32, level: usize) -> FreeWord {
    FreeWord::parse(text, genus, level).unwrap()
}

#[test]
fn act_generator_examples() {
    let k = KGroup::with_default_table(4, 1).unwrap();
    assert_eq!(k.act_generator(ActionGenerator::t(2, 3), &sym("b[1;4]", 1, 4)).unwrap(), fw("b[1;4]", 1, 4));
    assert_eq!(
        k.act_generator(ActionGenerator::t(2, 3), &sym("b[1;2]", 1, 4)).unwrap(),
        fw("b[1;2]^-1 b[1;3]^-1 b[1;2] b[1;3] b[1;2]", 1, 4)
    );
    assert_eq!(
        k.act_generator(ActionGenerator::a(2, 1), &sym("b[1;3]", 1, 4)).unwrap(),
        fw("b[1;2]^-1 b[1;3] b[1;2]", 1, 4)
    );
    assert_eq!(
        k.act_generator(ActionGenerator::t(2, 3), &sym("b[x1;2]", 1, 4)).unwrap(),
        fw("b[x1;2]^-1 b[x1;3]^-1 b[x1;2] b[x1;3] b[x1;2]", 1, 4)
    );
}

#[test]
fn a_actions_shift_gamma() {
    let k = KGroup::with_default_table(3, 1).unwrap();
    // a_{1,k}⁻¹ T_{1,2} a_{1,k} = b(x_k⁻¹, 2)
    assert_eq!(k.act_generator(ActionGenerator::a(2, 1), &sym("b[1;2]", 1, 3)).unwrap(), fw("b[x1^-1;2]", 1, 3));
    assert_eq!(k.act_generator(ActionGenerator::a(2, 2), &sym("b[1;2]", 1, 3)).unwrap(), fw("b[x2^-1;2]", 1, 3));
    assert_eq!(k.act_generator(ActionGenerator::a(3, 1), &sym("b[1;2]", 1, 3)).unwrap(), fw("b[1;2]", 1, 3));
    assert_eq!(
        k.act_generator(ActionGenerator::a(3, 2), &sym("b[1;3]", 1, 3)).unwrap(),
        fw("b[x2^-1;2]^-1 b[x2^-1;3] b[x2^-1;2]", 1, 3)
    );
}

#[test]
fn undefined_actions_fail_loudly() {
    let k = KGroup::with_default_table(3, 1).unwrap();
    let err = k.act_generator(ActionGenerator::a(2, 1), &sym("b[x2;2]", 1, 3)).unwrap_err();
    assert_eq!(err.code(), "k_group::action_undefined");
    let err = k.act_generator(ActionGenerator::a(2, 1).inv(), &sym("b[1;2]", 1, 3)).unwrap_err();
    assert_eq!(err.code(), "k_group::action_undefined");
    let err = k.act_generator(ActionGenerator::t(2, 4), &sym("b[1;2]", 1, 3)).unwrap_err();
    assert_eq!(err.code(), "k_group::action_undefined");
}

#[test]
fn table_entries_enable_a_actions() {
    let table = PeripheralTable::parse("A(2,1) a(1,1) -> a(1,1)\nA(2,1) a(1,2) -> a(1,2)\n", 3, 1).unwrap();
    let k = KGroup::new(3, 1, table).unwrap();
    let b = sym("b[x1;2]", 1, 3);
    let image = k.act_generator(ActionGenerator::a(2, 1), &b).unwrap();
    assert_eq!(image, fw("b[1;2]", 1, 3));
    // the prefix x2.x1^-1 is not literally canonical at g=1
    let err = k.act_generator(ActionGenerator::a(2, 1), &sym("b[x2;2]", 1, 3)).unwrap_err();
    assert_eq!(err.code(), "k_group::action_undefined");
    let back = image.try_map_letters(|s| k.act_generator(ActionGenerator::a(2, 1).inv(), s)).unwrap();
    assert_eq!(back, FreeWord::from_symbol(&b));
}

#[test]
fn multiply_examples() {
    let k = KGroup::with_default_table(3, 1).unwrap();
    let x = k.parse_element("b[x1;2]@3 b[1;2]@2").unwrap();
    assert_eq!(k.multiply(&k.identity(), &x).unwrap(), x);
    assert_eq!(k.multiply(&x, &k.identity()).unwrap(), x);

    let k2 = KGroup::with_default_table(2, 1).unwrap();
    let u = k2.parse_element("b[1;2]@2").unwrap();
    let v = k2.parse_element("b[x1;2]@2 b[1;2]@2^-1").unwrap();
    assert_eq!(k2.multiply(&u, &v).unwrap().to_string(), "b[1;2]@2 b[x1;2]@2 b[1;2]@2^-1");

    // ι(T_{2,3}) · b(1,2) · ι(T_{2,3})⁻¹
    let t23 = k.parse_element("b[1;2]@2").unwrap();
    let b12 = k.parse_element("b[1;2]@3").unwrap();
    let conj = k.product([&t23, &b12, &k.inverse(&t23).unwrap()]).unwrap();
    let expected = k.act_generator(ActionGenerator::t(2, 3), &sym("b[1;2]", 1, 3)).unwrap();
    assert_eq!(conj, KElement::from_level_word(3, &expected).unwrap());
}

#[test]
fn parse_round_trips_display() {
    let k = KGroup::with_default_table(4, 1).unwrap();
    for text in ["1", "b[x1;3]@4", "b[1;2]@4^-1 b[1;3]@3 b[1;2]@2"] {
        let x = k.parse_element(text).unwrap();
        assert_eq!(x.to_string(), text);
        assert_eq!(k.parse_element(&x.to_string()).unwrap(), x);
    }
    assert!(k.parse_element("b[1;2]").is_err());
}

#[test]
fn kappa_deg_and_classification() {
    let k = KGroup::with_default_table(3, 1).unwrap();
    let t12 = k.parse_element("b[1;2]@3").unwrap();
    assert_eq!(t12.kappa(), BTreeMap::from([((1, 2), 1)]));
    assert_eq!(k.inverse(&t12).unwrap().kappa(), BTreeMap::from([((1, 2), -1)]));
    let img = KElement::from_level_word(3, &k.act_generator(ActionGenerator::t(2, 3), &sym("b[1;2]", 1, 3)).unwrap()).unwrap();
    assert_eq!(img.kappa(), BTreeMap::from([((1, 2), 1)]));
    assert_eq!(t12.deg(), 1);
    assert_eq!(k.identity().deg(), 0);
    let three = k.parse_element("b[1;2]@3 b[x1;3]@3 b[1;2]@2").unwrap();
    assert_eq!(three.deg(), 3);

    assert_eq!(k.parse_element("b[x1;3]@3").unwrap().upsilon_classify().unwrap(), (1, 3));
    assert_eq!(k.parse_element("b[1;2]@2").unwrap().upsilon_classify().unwrap(), (2, 3));
    let err = k.parse_element("b[1;2]@3 b[1;3]@3").unwrap().upsilon_classify().unwrap_err();
    assert_eq!(err.code(), "k_group::not_upsilon");
}

#[test]
fn commutation_examples() {
    let k2 = KGroup::with_default_table(2, 1).unwrap();
    let u = k2.parse_element("b[1;2]@2").unwrap();
    let v = k2.parse_element("b[x1;2]@2").unwrap();
    assert!(k2.commutes(&u, &u).unwrap());
    assert!(!k2.commutes(&u, &v).unwrap());
    let k3 = KGroup::with_default_table(3, 1).unwrap();
    let b12 = k3.parse_element("b[1;2]@3").unwrap();
    let t23 = k3.parse_element("b[1;2]@2").unwrap();
    assert!(!k3.commutes(&b12, &t23).unwrap());
    let b13 = k3.parse_element("b[1;3]@3").unwrap();
    let t23b13 = k3.multiply(&t23, &b13).unwrap();
    assert!(!k3.commutes(&b13, &t23b13).unwrap());
}

#[test]
fn upsilon_elements() {
    let c = fw("b[1;3] b[x1;2]", 1, 3);
    let u = UpsilonElement::new(c, sym("b[1;2]", 1, 3)).unwrap();
    assert_eq!(u.strand_pair(3), (1, 2));
    let x = u.to_element(3).unwrap();
    assert_eq!(x.deg(), 1);
    assert_eq!(x.upsilon_classify().unwrap(), (1, 2));
    assert_eq!(u.key().0, fw("b[1;2]", 1, 3));
    let low = UpsilonElement::basis(sym("b[1;2]", 1, 2));
    assert_eq!(low.strand_pair(4), (3, 4));
    assert!(UpsilonElement::new(fw("b[1;2]", 1, 2), sym("b[1;2]", 1, 3)).is_err());
}

fn gammas(genus: u32, max_len: usize) -> Vec<SurfaceWord> {
    let mut out = vec![SurfaceWord::identity(genus)];
    let mut frontier = out.clone();
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for k in 1..=2 * genus {
                for inverse in [false, true] {
                    let x = SurfaceWord::generator(genus, k, inverse).unwrap();
                    next.push(w.product(&x).unwrap());
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

#[test]
fn every_defined_action_is_a_conjugate_of_one_symbol() {
    let k = KGroup::with_default_table(4, 1).unwrap();
    let mut actors = Vec::new();
    for r in 2..=4 {
        for s in r + 1..=4 {
            actors.push(ActionGenerator::t(r, s));
        }
    }
    for i in 2..=4 {
        for kk in 1..=2 {
            actors.push(ActionGenerator::a(i, kk));
        }
    }
    let mut defined = 0;
    for z in actors {
        for gamma in gammas(1, 2) {
            for j in 2..=4 {
                let b = BasisSymbol::new(&gamma, j, 4).unwrap();
                let img = match k.act_generator(z, &b) {
                    Ok(img) => img,
                    Err(e) => {
                        assert!(matches!(z.kind, ActionKind::A { .. }) && !b.gamma().is_empty(), "{z} {b}: {e}");
                        continue;
                    }
                };
                defined += 1;
                let rep = img.conj_class_rep().unwrap();
                assert_eq!(rep.len(), 1, "{z} {b}");
                assert_eq!(rep.letters()[0].symbol.strand(), j);
                assert!(!rep.letters()[0].inverse);
                assert_eq!(img.abelianize().values().sum::<i64>(), 1);
                if let ActionKind::T { .. } = z.kind {
                    let back = img.try_map_letters(|s| k.act_generator(z.inv(), s)).unwrap();
                    assert_eq!(back, FreeWord::from_symbol(&b), "{z} {b}");
                }
            }
        }
    }
    assert!(defined > 0);
}

/// Random element with an arbitrary top level and γ-trivial lower levels.
fn arb_element(n: usize, genus: u32) -> impl Strategy<Value = KElement> {
    let top = prop::collection::vec((2..=n, 0..3u32, 1..=2 * genus, any::<bool>(), any::<bool>()), 0..4);
    let lower = prop::collection::vec((2..n, 2..n, any::<bool>()), 0..3);
    (top, lower).prop_map(move |(top, lower)| {
        let k = KGroup::with_default_table(n, genus).unwrap();
        let mut acc = k.identity();
        for (j, len, gen, ginv, inv) in top {
            let gamma = (0..len)
                .map(|t| SurfaceWord::generator(genus, 1 + (gen + t) % (2 * genus), ginv).unwrap())
                .fold(SurfaceWord::identity(genus), |a, b| a.product(&b).unwrap());
            let s = BasisSymbol::new(&gamma, j, n).unwrap();
            let l = FreeWord::new(n, vec![FreeLetter { symbol: s, inverse: inv }]).unwrap();
            acc = k.multiply(&acc, &KElement::from_level_word(n, &l).unwrap()).unwrap();
        }
        for (m, j, inv) in lower {
            let j = 2 + (j - 2) % (m - 1);
            let s = BasisSymbol::core(genus, j, m).unwrap();
            let l = FreeWord::new(m, vec![FreeLetter { symbol: s, inverse: inv }]).unwrap();
            acc = k.multiply(&acc, &KElement::from_level_word(n, &l).unwrap()).unwrap();
        }
        acc
    })
}

fn add(a: &BTreeMap<(usize, usize), i64>, b: &BTreeMap<(usize, usize), i64>) -> BTreeMap<(usize, usize), i64> {
    let mut out = a.clone();
    for (k, v) in b {
        *out.entry(*k).or_default() += v;
    }
    out.retain(|_, v| *v != 0);
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn kappa_and_deg_are_additive(x in arb_element(4, 1), y in arb_element(4, 1)) {
        let k = KGroup::with_default_table(4, 1).unwrap();
        let xy = k.multiply(&x, &y).unwrap();
        prop_assert_eq!(xy.kappa(), add(&x.kappa(), &y.kappa()));
        prop_assert_eq!(xy.deg(), x.deg() + y.deg());
    }

    #[test]
    fn multiplication_is_associative(x in arb_element(4, 1), y in arb_element(4, 1), z in arb_element(4, 1)) {
        let k = KGroup::with_default_table(4, 1).unwrap();
        let left = k.multiply(&k.multiply(&x, &y).unwrap(), &z).unwrap();
        let right = k.multiply(&x, &k.multiply(&y, &z).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn inverse_is_two_sided(x in arb_element(4, 1)) {
        let k = KGroup::with_default_table(4, 1).unwrap();
        let inv = k.inverse(&x).unwrap();
        prop_assert!(k.multiply(&x, &inv).unwrap().is_identity());
        prop_assert!(k.multiply(&inv, &x).unwrap().is_identity());
    }
}
