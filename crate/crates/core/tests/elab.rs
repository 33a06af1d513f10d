use colfw_core::diag::Code;
use colfw_core::driver::{check_source, load, Options};
use colfw_core::surface::print::{PrintOptions, Printer};

const NAT: &str = "nat : type. zero : nat. succ : nat -> nat.\n";

fn codes(src: &str) -> Vec<Code> {
    load(&format!("{}{}", NAT, src)).1.iter().map(|d| d.code).collect()
}

fn shown(src: &str, name: &str) -> String {
    let (sig, diags) = load(&format!("{}{}", NAT, src));
    assert!(diags.is_empty(), "{:?}", diags);
    let d = sig.get_str(name).unwrap();
    Printer::new(Some(&sig), PrintOptions { show_implicit: true }).decl(d)
}

#[test]
fn implicit_arguments_are_inferred_and_ordered() {
    let src = "le : nat -> nat -> type. le/s : le X Y -> le (succ X) (succ Y).";
    assert_eq!(shown(src, "le/s"), "le/s : {X : nat} {Y : nat} le X Y -> le (succ X) (succ Y).");
    let (sig, _) = load(&format!("{}{}", NAT, src));
    assert_eq!(sig.get_str("le/s").unwrap().implicit, 2);
}

#[test]
fn uses_fill_implicit_arguments() {
    let src = "le : nat -> nat -> type. le/z : le zero N. le/s : le X Y -> le (succ X) (succ Y).
               one : le (succ zero) (succ (succ zero)) = le/s le/z.";
    assert_eq!(shown(src, "one"), "one : le (succ zero) (succ (succ zero)) = le/s zero (succ zero) (le/z (succ zero)).");
}

#[test]
fn variables_are_eta_expanded() {
    let src = "f : (nat -> nat) -> nat. g : (nat -> nat) -> nat = [h] f h.";
    assert_eq!(shown(src, "g"), "g : (nat -> nat) -> nat = [h] f ([x] h x).");
}

#[test]
fn binder_types_are_inferred() {
    let src = "p : nat -> type. q : ({x} p x) -> type.";
    assert_eq!(shown(src, "q"), "q : ({x : nat} p x) -> type.");
}

#[test]
fn scoping_errors() {
    assert_eq!(codes("a : foo."), [Code::Undeclared]);
    assert_eq!(codes("a : nat = y."), [Code::Undeclared]);
    assert_eq!(codes("zero : nat."), [Code::Duplicate]);
    assert_eq!(codes("a : zero."), [Code::Namespace]);
    assert_eq!(codes("a : nat = nat."), [Code::Namespace]);
    // a definition body cannot introduce implicit variables
    assert_eq!(codes("a : nat = succ X."), [Code::Undeclared]);
}

#[test]
fn implicit_and_bound_uses_of_one_name_clash() {
    let src = "p : nat -> type. c : p N -> {N : nat} p N.";
    assert_eq!(codes(src), [Code::Shadowing]);
}

#[test]
fn uninferable_types() {
    // X never constrains its type
    assert_eq!(codes("c : {x} nat."), [Code::CannotInferImplicit]);
    // a shape error on a variable is left to the kernel
    assert!(codes("p : nat -> type. c : p (X zero) -> p X.").is_empty());
    let src = format!("{}p : nat -> type. c : p (X zero) -> p X.", NAT);
    let out = check_source(&src, &Options::default());
    assert_eq!(out.diagnostics.iter().map(|d| d.code).collect::<Vec<_>>(), [Code::SpineArity]);
}

#[test]
fn occurs_check() {
    let src = "eq : nat -> nat -> type. refl : eq Y Y.
               f : {A : nat} eq A (succ A) -> type. g : f _ refl -> type.";
    assert_eq!(codes(src), [Code::OccursCheck]);
    let bad = "eq : nat -> nat -> type. refl : eq X X. bad : eq (succ zero) zero = refl.";
    assert_eq!(codes(bad), [Code::TypeMismatch]);
}

#[test]
fn lambda_against_atomic_type() {
    assert_eq!(codes("a : nat = [x] x."), [Code::LambdaAgainstAtomic]);
}

#[test]
fn failed_declarations_are_skipped() {
    let (sig, diags) = load(&format!("{}a : foo. b : nat = a.", NAT));
    assert_eq!(diags.len(), 2);
    assert!(sig.get_str("a").is_none() && sig.get_str("b").is_none());
}
