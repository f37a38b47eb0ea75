use std::collections::{BTreeMap, BTreeSet};

use blockatlas::symbols::{enumerate_symbols, DefectClass, Symbol};

type Partition = BTreeSet<BTreeSet<Symbol>>;

fn group<F: Fn(&Symbol) -> Symbol>(symbols: &[Symbol], key: F) -> Partition {
    let mut by: BTreeMap<Symbol, BTreeSet<Symbol>> = BTreeMap::new();
    for s in symbols {
        by.entry(key(s)).or_default().insert(s.canonical());
    }
    by.into_values().collect()
}

fn image(p: &Partition) -> Partition {
    p.iter()
        .map(|block| block.iter().map(|s| s.phi().canonical()).collect())
        .collect()
}

#[test]
fn phi_sends_hook_series_to_cohook_series() {
    for n in 0..=8 {
        let all = enumerate_symbols(n, DefectClass::Any).unwrap();
        let hook1 = group(&all, |s| s.hook_core(1));
        let cohook1 = group(&all, |s| s.cohook_core(1));
        let cohook2 = group(&all, |s| s.cohook_core(2));
        assert_eq!(image(&hook1), cohook1, "rank {n}");
        assert_eq!(image(&cohook1), hook1, "rank {n}");
        assert_eq!(image(&cohook2), cohook2, "rank {n}");
    }
}
