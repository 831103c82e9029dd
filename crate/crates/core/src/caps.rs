//! Size caps shared by every module.
//!
//! Defaults can be overridden through the `GLOBALK_CAPS` environment
//! variable, e.g. `GLOBALK_CAPS="order=24,points=48,dim=3"`. The variable is
//! read once; the resulting value is immutable for the life of the process.

use std::sync::OnceLock;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    /// Largest group order accepted by the group machinery.
    pub order: usize,
    /// Largest G-set handled by the explicit action tables.
    pub points: usize,
    /// Largest module dimension for the module oracle.
    pub dim: usize,
    /// Largest structure group for G-set and module instances.
    pub gamma: usize,
    /// Largest window group in combined computations.
    pub window_order: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            order: 48,
            points: 64,
            dim: 4,
            gamma: 12,
            window_order: 8,
        }
    }
}

impl Caps {
    pub fn parse(text: &str) -> Result<Caps> {
        let mut caps = Caps::default();
        for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("cap `{item}` is not key=value")))?;
            let value: usize = value
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("cap `{item}` has a non-numeric value")))?;
            match key.trim() {
                "order" => caps.order = value,
                "points" => caps.points = value,
                "dim" => caps.dim = value,
                "gamma" => caps.gamma = value,
                "window" | "window_order" => caps.window_order = value,
                other => return Err(Error::Parse(format!("unknown cap `{other}`"))),
            }
        }
        Ok(caps)
    }

    /// Largest direct product formed internally: bisets between window
    /// groups and `G × Γ` for G-sets with a structure group.
    pub fn product_order(&self) -> usize {
        self.order
            .max(self.window_order * self.window_order.max(self.gamma))
    }

    /// Process-wide caps; `GLOBALK_CAPS` is consulted on first use. A
    /// malformed variable falls back to the defaults.
    pub fn global() -> Caps {
        static CAPS: OnceLock<Caps> = OnceLock::new();
        *CAPS.get_or_init(|| {
            std::env::var("GLOBALK_CAPS")
                .ok()
                .and_then(|s| Caps::parse(&s).ok())
                .unwrap_or_default()
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_overrides_only_named_caps() {
        let caps = Caps::parse("order=24, dim=3").unwrap();
        assert_eq!(caps.order, 24);
        assert_eq!(caps.dim, 3);
        assert_eq!(caps.points, Caps::default().points);
    }

    #[test]
    fn parse_rejects_unknown_keys() {
        assert!(Caps::parse("colour=3").is_err());
        assert!(Caps::parse("order").is_err());
    }
}
