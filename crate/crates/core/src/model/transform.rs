use alloc::vec::Vec;

use super::{ModelError, PropSet, Structure};
use crate::syntax::Prop;

/// Renames propositions by an injective map. Propositions not mentioned
/// map to themselves. Tables are index-based, so only the names change.
pub fn rename_props(m: &Structure, map: &[(Prop, Prop)]) -> Result<Structure, ModelError> {
    let mut props: Vec<Prop> = m.props().to_vec();
    for (from, to) in map {
        let i = m.prop_index(from).ok_or_else(|| ModelError::UnknownProp(from.name().into()))?;
        props[i] = to.clone();
    }
    for (i, p) in props.iter().enumerate() {
        if props[..i].contains(p) {
            return Err(ModelError::NotInjective(p.name().into()));
        }
    }
    let mut parts = m.parts().clone();
    parts.props = props;
    Ok(Structure::from_parts_unchecked(parts))
}

/// Exchanges the roles of `p` and `p2` in every language, valuation and
/// awareness set. Relations and names stay as they are.
pub fn swap_model(m: &Structure, p: &Prop, p2: &Prop) -> Result<Structure, ModelError> {
    let i = m.prop_index(p).ok_or_else(|| ModelError::UnknownProp(p.name().into()))?;
    let j = m.prop_index(p2).ok_or_else(|| ModelError::UnknownProp(p2.name().into()))?;
    if i == j {
        return Err(ModelError::SwapSelf);
    }
    let swap = |s: &mut PropSet| {
        let (a, b) = (s.contains(i), s.contains(j));
        if a != b {
            s.0 ^= (1 << i) | (1 << j);
        }
    };
    let mut parts = m.parts().clone();
    parts.lang.iter_mut().for_each(swap);
    parts.val.iter_mut().for_each(swap);
    parts.aware.iter_mut().flatten().for_each(swap);
    Ok(Structure::from_parts_unchecked(parts))
}
