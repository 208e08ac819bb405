use ssfilter_core::families::{
    family_pencils_curve, family_pencils_p1, family_tuples, family_uconf_plane, ColumnSpace, FamilyDescriptor,
    FamilyError,
};
use ssfilter_core::superalg::{PresentedAlgebra, TensorElement};
use ssfilter_core::Rational;

type Fam = FamilyDescriptor<Rational>;

fn q(v: i64) -> Rational {
    Rational::from_integer(v.into())
}

fn tail(fam: &Fam, p: usize) -> PresentedAlgebra<Rational> {
    match fam.column_space(p).unwrap() {
        ColumnSpace::Presented(a) => (**a).clone(),
        other => panic!("column {p} is not presented: {other:?}"),
    }
}

/// Sum of `sign_i * f_{p,i}` applied to `x`, with the signs `(-1)^i`.
fn alternating(fam: &Fam, p: usize, x: &TensorElement<Rational>) -> TensorElement<Rational> {
    let mut out = TensorElement::new(p + 1);
    for i in 1..=p + 1 {
        let y = fam.face_pullback(p, i).unwrap().unwrap().apply(x);
        out.add_assign(&y.scale(&q(if i % 2 == 1 { -1 } else { 1 })));
    }
    out
}

#[test]
fn face_pullbacks_are_multiplicative() {
    let mut fams: Vec<Fam> = vec![family_pencils_p1(1, 4).unwrap(), family_pencils_p1(2, 5).unwrap()];
    fams.extend([(0, 3), (1, 3), (1, 4), (2, 5)].map(|(g, n)| family_pencils_curve(g, n).unwrap()));
    for fam in &fams {
        for p in 0..fam.max_valid_column().min(3) {
            for i in 1..=p + 1 {
                let Some(face) = fam.face_pullback(p, i).unwrap() else { continue };
                face.check_multiplicative().unwrap_or_else(|e| panic!("{} p={p} i={i}: {e}", fam.name()));
            }
        }
    }
}

#[test]
fn first_face_on_the_projective_line() {
    let fam = family_pencils_p1::<Rational>(1, 4).unwrap();
    let (x0, x1) = (tail(&fam, 0), tail(&fam, 1));
    let slot = fam.slot_algebra().unwrap();
    let (one, e) = (slot.unit_index(), slot.basis_index("e").unwrap());
    let face = fam.face_pullback(0, 1).unwrap().unwrap();
    let c1 = face.apply(&TensorElement::pure(vec![], x0.basis_index("c1").unwrap()));
    let mut expect = TensorElement::pure(vec![one], x1.basis_index("c1").unwrap());
    expect.add_term(vec![e], x1.unit_index(), q(-2));
    assert_eq!(c1, expect);
    let c2 = face.apply(&TensorElement::pure(vec![], x0.basis_index("c2").unwrap()));
    let mut expect = TensorElement::pure(vec![one], x1.basis_index("c2").unwrap());
    expect.add_term(vec![e], x1.basis_index("c1").unwrap(), q(-1));
    assert_eq!(c2, expect);
}

#[test]
fn earlier_slots_stay_put() {
    for fam in [family_pencils_p1::<Rational>(1, 4).unwrap(), family_pencils_curve(1, 4).unwrap()] {
        let slot = fam.slot_algebra().unwrap().clone();
        let unit = tail(&fam, 1).unit_index();
        for x in 0..slot.dim() {
            let y = fam.face_pullback(1, 2).unwrap().unwrap().apply(&TensorElement::pure(vec![x], unit));
            assert_eq!(y, TensorElement::pure(vec![x, slot.unit_index()], tail(&fam, 2).unit_index()));
        }
    }
}

#[test]
fn face_and_column_ranges() {
    let fam = family_pencils_curve::<Rational>(1, 4).unwrap();
    assert!(matches!(fam.face_pullback(1, 0), Err(FamilyError::FaceRange { .. })));
    assert!(matches!(fam.face_pullback(1, 3), Err(FamilyError::FaceRange { .. })));
    assert!(matches!(fam.column_space(4), Err(FamilyError::ColumnRange { .. })));
    assert!(matches!(family_pencils_curve::<Rational>(3, 5), Err(FamilyError::StableRange { g: 3, n: 5 })));
    let e = family_pencils_p1::<Rational>(1, 4).unwrap().column_space(4).unwrap_err();
    assert!(e.to_string().contains("n - 1"), "{e}");
    assert!(family_uconf_plane::<Rational>(5).face_pullback(0, 1).is_err());
    assert!(family_tuples::<Rational>(2, 3).unwrap().face_pullback(0, 1).is_err());
}

/// The alternating sum of face pullbacks on `a_r`: at even `p` it keeps
/// `a_r` and adds the `alpha_r` slot sum with alternating signs; at odd `p`
/// the `a_r` terms cancel and only the alternating slot sum survives.
#[test]
fn picard_generator_images_carry_alternating_signs() {
    let fam = family_pencils_curve::<Rational>(1, 5).unwrap();
    let slot = fam.slot_algebra().unwrap().clone();
    let one = slot.unit_index();
    for p in 0..=2 {
        let (src, tgt) = (tail(&fam, p), tail(&fam, p + 1));
        for r in 1..=2 {
            let a = src.basis_index(&format!("a{r}")).unwrap();
            let alpha = slot.basis_index(&format!("alpha{r}")).unwrap();
            let x = TensorElement::pure(vec![one; p], a);
            let mut expect = TensorElement::new(p + 1);
            if p % 2 == 0 {
                expect.add_term(vec![one; p + 1], tgt.basis_index(&format!("a{r}")).unwrap(), q(-1));
            }
            for i in 1..=p + 1 {
                let mut slots = vec![one; p + 1];
                slots[i - 1] = alpha;
                expect.add_term(slots, tgt.unit_index(), q(if i % 2 == 1 { -1 } else { 1 }));
            }
            assert_eq!(alternating(&fam, p, &x), expect, "p={p} r={r}");
        }
    }
}
