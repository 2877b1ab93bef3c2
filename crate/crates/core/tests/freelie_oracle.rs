//! Derivations acting on bracket trees, checked against the word-level
//! implementation.

use lmo_core::diagram::rat;
use lmo_core::freelie::{
    ad_n, bracket, deriv_act, deriv_bracket, nu, sigma1, sigma5, verify_depth1_identity, NcPoly, TangentialDeriv,
};
use num_rational::BigRational;

#[derive(Clone, Debug)]
enum Tree {
    X,
    Y,
    Scale(BigRational, Box<Tree>),
    Sum(Vec<Tree>),
    Br(Box<Tree>, Box<Tree>),
    /// A fixed polynomial, used for the images of the generators.
    Leaf(NcPoly),
}

fn br(a: Tree, b: Tree) -> Tree {
    Tree::Br(Box::new(a), Box::new(b))
}

fn scale(c: BigRational, t: Tree) -> Tree {
    Tree::Scale(c, Box::new(t))
}

fn ad_tree(a: &Tree, n: usize, b: Tree) -> Tree {
    (0..n).fold(b, |acc, _| br(a.clone(), acc))
}

fn eval(t: &Tree) -> NcPoly {
    match t {
        Tree::X => NcPoly::x(),
        Tree::Y => NcPoly::y(),
        Tree::Scale(c, s) => eval(s).scale(c),
        Tree::Sum(v) => v.iter().fold(NcPoly::zero(), |acc, s| &acc + &eval(s)),
        Tree::Br(a, b) => bracket(&eval(a), &eval(b)),
        Tree::Leaf(p) => p.clone(),
    }
}

/// Derivation on trees: substitutes at the leaves and applies the Leibniz rule
/// at each bracket.
fn act(u: &(Tree, Tree), t: &Tree) -> Tree {
    match t {
        Tree::X => u.0.clone(),
        Tree::Y => u.1.clone(),
        Tree::Scale(c, s) => scale(c.clone(), act(u, s)),
        Tree::Sum(v) => Tree::Sum(v.iter().map(|s| act(u, s)).collect()),
        Tree::Br(a, b) => Tree::Sum(vec![br(act(u, a), (**b).clone()), br((**a).clone(), act(u, b))]),
        Tree::Leaf(_) => panic!("derivations act on generator trees only"),
    }
}

fn s1_tree(a: &Tree, b: &Tree) -> Tree {
    scale(rat(1, 2), br(a.clone(), b.clone()))
}

fn s5_tree(a: &Tree, b: &Tree) -> Tree {
    let t = Tree::Sum(vec![
        scale(rat(1, 2), ad_tree(a, 4, b.clone())),
        scale(rat(1, 2), ad_tree(b, 4, a.clone())),
        br(br(a.clone(), b.clone()), ad_tree(a, 2, b.clone())),
    ]);
    scale(rat(-1, 240), t)
}

fn z() -> Tree {
    scale(rat(-1, 1), Tree::Sum(vec![Tree::X, Tree::Y]))
}

fn nu_tree(f: impl Fn(&Tree, &Tree) -> Tree) -> (Tree, Tree) {
    (f(&z(), &Tree::X), f(&z(), &Tree::Y))
}

fn bracket_tree(u: &(Tree, Tree), v: &(Tree, Tree)) -> (Tree, Tree) {
    (
        Tree::Sum(vec![act(u, &v.0), scale(rat(-1, 1), act(v, &u.0))]),
        Tree::Sum(vec![act(u, &v.1), scale(rat(-1, 1), act(v, &u.1))]),
    )
}

fn to_deriv(u: &(Tree, Tree)) -> TangentialDeriv {
    TangentialDeriv::new(eval(&u.0), eval(&u.1))
}

#[test]
fn generators_match_tree_definitions() {
    let (x, y) = (NcPoly::x(), NcPoly::y());
    assert_eq!(sigma1(&x, &y), eval(&s1_tree(&Tree::X, &Tree::Y)));
    assert_eq!(sigma5(&x, &y), eval(&s5_tree(&Tree::X, &Tree::Y)));
    assert_eq!(to_deriv(&nu_tree(s1_tree)), nu(sigma1));
    assert_eq!(to_deriv(&nu_tree(s5_tree)), nu(sigma5));
}

#[test]
fn word_action_equals_tree_action() {
    let u = nu_tree(s1_tree);
    let ud = to_deriv(&u);
    let targets = [
        br(Tree::X, Tree::Y),
        ad_tree(&Tree::X, 3, Tree::Y),
        br(br(Tree::X, Tree::Y), ad_tree(&Tree::Y, 2, Tree::X)),
        s5_tree(&Tree::X, &Tree::Y),
    ];
    for t in &targets {
        assert_eq!(deriv_act(&ud, &eval(t)), eval(&act(&u, t)));
    }
}

#[test]
fn bracket_of_nu_images_matches_tree_bracket() {
    let u = nu_tree(s1_tree);
    let v = nu_tree(s5_tree);
    let tree = to_deriv(&bracket_tree(&u, &v));
    let words = deriv_bracket(&nu(sigma1), &nu(sigma5));
    assert_eq!(words, tree);
    assert!(words.is_lie());
}

#[test]
fn depth_one_report_against_trees() {
    let r = verify_depth1_identity();
    let commutator = nu_tree(|a, b| br(s1_tree(a, b), s5_tree(a, b)));
    assert_eq!(r.lhs_single, to_deriv(&commutator).depth_part(1));
    let rhs = to_deriv(&bracket_tree(&nu_tree(s1_tree), &nu_tree(s5_tree))).depth_part(1);
    assert_eq!(r.rhs, rhs);
    let ad4 = ad_n(&NcPoly::x(), 4, &NcPoly::y());
    assert_eq!(r.expected_rhs, TangentialDeriv::new(NcPoly::zero(), ad4.scale(&rat(-1, 120))));
    assert_eq!(r.expected_lhs_single, TangentialDeriv::new(NcPoly::zero(), ad4.scale(&rat(-1, 240))));
}

#[test]
fn leaf_images_are_substitutions() {
    let a = ad_n(&NcPoly::x(), 2, &NcPoly::y());
    let b = bracket(&NcPoly::y(), &NcPoly::x());
    let u = (Tree::Leaf(a.clone()), Tree::Leaf(b.clone()));
    let t = br(Tree::X, br(Tree::X, Tree::Y));
    let d = TangentialDeriv::new(a, b);
    assert_eq!(deriv_act(&d, &eval(&t)), eval(&act(&u, &t)));
}
