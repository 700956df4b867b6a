use super::{EquationSet, Type};

/// Encode ∧ and ∨ with → and ⊥:
/// `A /\ B` becomes `~(A -> B -> bot)` and `A \/ B` becomes `~A -> ~B -> bot`.
pub fn circle_type(a: &Type) -> Type {
    match a {
        Type::Atom(_) | Type::Bot => a.clone(),
        Type::Arrow(l, r) => Type::arrow(circle_type(l), circle_type(r)),
        Type::And(l, r) => Type::neg(Type::arrow(circle_type(l), Type::arrow(circle_type(r), Type::Bot))),
        Type::Or(l, r) => Type::arrow(Type::neg(circle_type(l)), Type::arrow(Type::neg(circle_type(r)), Type::Bot)),
    }
}

pub fn circle_equations(eqs: &EquationSet) -> EquationSet {
    EquationSet::new(eqs.iter().map(|(x, f)| (x, circle_type(f))))
        .expect("the encoding maps contractive systems to contractive systems")
}
