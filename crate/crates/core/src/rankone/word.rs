use alloc::string::String;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigUint;

use super::data::ConstructionData;
use super::tower::Tower;
use crate::{Error, Result};

/// Default limit on the number of symbols [`expand_word`] materializes.
pub const DEFAULT_EXPANSION_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Symbol {
    Base,
    Spacer,
}

impl Symbol {
    pub fn as_char(self) -> char {
        match self {
            Symbol::Base => 'B',
            Symbol::Spacer => 's',
        }
    }
}

/// The explicit word `B_n` over `{B, s}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolicWord {
    symbols: Vec<Symbol>,
    level: usize,
}

impl SymbolicWord {
    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn base_count(&self) -> usize {
        self.symbols.iter().filter(|&&s| s == Symbol::Base).count()
    }
}

impl fmt::Display for SymbolicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.symbols.iter().map(|s| s.as_char()).collect();
        f.write_str(&s)
    }
}

/// `B_n` with the default budget.
pub fn expand_word(data: &ConstructionData, n: usize) -> Result<SymbolicWord> {
    expand_word_with_budget(data, n, DEFAULT_EXPANSION_BUDGET)
}

/// `B_1 = B`, and `B_{n+1}` is `B_n` followed by `S_{n,1}` spacers, ...,
/// `B_n` followed by `S_{n,c_n}` spacers.
pub fn expand_word_with_budget(
    data: &ConstructionData,
    n: usize,
    budget: u64,
) -> Result<SymbolicWord> {
    assert!(n >= 1, "words are numbered from 1");
    let mut tower = Tower::new(data.clone());
    tower.ensure(n)?;
    let height = tower.height(n);
    if *height > BigUint::from(budget) {
        return Err(Error::BudgetExceeded {
            level: n,
            height: height.to_string(),
            budget,
        });
    }
    let mut word = vec![Symbol::Base];
    for stage in 1..n {
        let spacers = &tower.spacers[stage - 1];
        let len = u64::try_from(tower.height(stage + 1)).expect("within budget") as usize;
        let mut next = Vec::with_capacity(len);
        for s in spacers {
            next.extend_from_slice(&word);
            let s = u64::try_from(s).expect("within budget") as usize;
            next.extend(core::iter::repeat_n(Symbol::Spacer, s));
        }
        word = next;
    }
    Ok(SymbolicWord {
        symbols: word,
        level: n,
    })
}
