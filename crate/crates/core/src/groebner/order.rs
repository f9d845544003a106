use std::cmp::Ordering;

use crate::polyring::{Monomial, OrderKind};

/// How module terms `m·e_i` with different positions are compared.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub enum PositionRule {
    /// Term over position: compare monomials first.
    #[default]
    Top,
    /// Position over term.
    Pot,
    /// Schreyer order induced by leading terms `w_i·e_{p_i}` of a labeled
    /// generator list: `m·e_i` is weighed as `m·w_i` at position `p_i`.
    Schreyer(Vec<(Monomial, usize)>),
}

/// A monomial order on the free module `R^m`. A smaller position index
/// counts as larger.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ModuleOrder {
    pub kind: OrderKind,
    pub position: PositionRule,
}

impl ModuleOrder {
    pub fn top(kind: OrderKind) -> ModuleOrder {
        ModuleOrder { kind, position: PositionRule::Top }
    }

    pub fn pot(kind: OrderKind) -> ModuleOrder {
        ModuleOrder { kind, position: PositionRule::Pot }
    }

    pub fn compare(&self, pa: usize, ma: &Monomial, pb: usize, mb: &Monomial) -> Ordering {
        match &self.position {
            PositionRule::Top => self.kind.compare(ma, mb).then_with(|| pb.cmp(&pa)),
            PositionRule::Pot => pb.cmp(&pa).then_with(|| self.kind.compare(ma, mb)),
            PositionRule::Schreyer(w) => {
                let (wa, qa) = &w[pa];
                let (wb, qb) = &w[pb];
                self.kind
                    .compare(&ma.mul(wa), &mb.mul(wb))
                    .then_with(|| qb.cmp(qa))
                    .then_with(|| pb.cmp(&pa))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[u32]) -> Monomial {
        Monomial::from_exponents(e)
    }

    #[test]
    fn top_versus_pot() {
        let top = ModuleOrder::top(OrderKind::Degrevlex);
        let pot = ModuleOrder::pot(OrderKind::Degrevlex);
        // x·e_1 against x^2·e_0
        assert_eq!(top.compare(1, &m(&[1]), 0, &m(&[2])), Ordering::Less);
        assert_eq!(pot.compare(1, &m(&[3]), 0, &m(&[2])), Ordering::Less);
        assert_eq!(top.compare(1, &m(&[1]), 0, &m(&[1])), Ordering::Less);
    }

    #[test]
    fn schreyer_uses_weights() {
        let ord = ModuleOrder {
            kind: OrderKind::Degrevlex,
            position: PositionRule::Schreyer(vec![(m(&[1, 0]), 0), (m(&[0, 2]), 0)]),
        };
        // x·e_0 weighs x^2, 1·e_1 weighs y^2
        assert_eq!(ord.compare(0, &m(&[1, 0]), 1, &m(&[0, 0])), Ordering::Greater);
        assert_eq!(ord.compare(0, &m(&[0, 0]), 1, &m(&[0, 0])), Ordering::Less);
    }
}
