use serde::Serialize;

use super::gaps::Item;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum ItemState {
    #[default]
    Idle,
    Suspended,
    Adopted,
    Rejected,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct NodeState {
    pub a: ItemState,
    pub b: ItemState,
}

impl NodeState {
    #[inline]
    pub fn get(&self, item: Item) -> ItemState {
        match item {
            Item::A => self.a,
            Item::B => self.b,
        }
    }

    #[inline]
    pub fn set(&mut self, item: Item, s: ItemState) {
        match item {
            Item::A => self.a = s,
            Item::B => self.b = s,
        }
    }

    /// Joint states the diffusion can actually produce. A rejection only happens to a node
    /// that already holds the other item, or to one whose suspended item lost its
    /// reconsideration right after it adopted the other item.
    pub fn is_reachable(&self) -> bool {
        use ItemState::*;
        !matches!(
            (self.a, self.b),
            (Idle, Rejected) | (Suspended, Rejected) | (Rejected, Idle) | (Rejected, Suspended) | (Rejected, Rejected)
        )
    }
}
