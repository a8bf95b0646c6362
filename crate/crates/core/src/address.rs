use std::fmt;

/// Node identifier.
///
/// Addresses are totally ordered by their numeric value. The order is only
/// used for tie-breaking (candidate order during next-hop selection and
/// iteration order of routing tables).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Address(u32);

impl Address {
    /// Reserved link-local broadcast address. Never stored as a next hop.
    pub const BROADCAST: Address = Address(u32::MAX);

    pub const fn new(raw: u32) -> Self {
        Self(raw)
    }

    pub const fn raw(self) -> u32 {
        self.0
    }

    pub const fn index(self) -> usize {
        self.0 as usize
    }

    pub const fn is_broadcast(self) -> bool {
        self.0 == u32::MAX
    }
}

impl From<u32> for Address {
    fn from(raw: u32) -> Self {
        Self(raw)
    }
}

impl fmt::Display for Address {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_broadcast() {
            f.write_str("*")
        } else {
            write!(f, "{}", self.0)
        }
    }
}
