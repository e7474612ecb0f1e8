//! Name-keyed registries of interchangeable strategies.
//!
//! Spatial backends, range-kernel approximations and bilateral filters are
//! each exposed as a trait object. A [`Registry`] maps their names to shared
//! instances so that callers (the CLI, the benchmark harness) can pick one at
//! runtime from a string.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Anything that can be registered under a stable, lowercase name.
pub trait Named {
    fn name(&self) -> &'static str;
}

pub struct Registry<T: ?Sized> {
    kind: &'static str,
    entries: Vec<Arc<T>>,
}

impl<T: ?Sized + Named> Registry<T> {
    /// `kind` is used in error messages, e.g. "spatial backend".
    pub fn new(kind: &'static str) -> Self {
        Self {
            kind,
            entries: Vec::new(),
        }
    }

    /// Registers `entry`, replacing any previous entry with the same name.
    pub fn register(&mut self, entry: Arc<T>) -> &mut Self {
        let name = entry.name();
        self.entries.retain(|e| e.name() != name);
        self.entries.push(entry);
        self
    }

    pub fn with(mut self, entry: Arc<T>) -> Self {
        self.register(entry);
        self
    }

    pub fn get(&self, name: &str) -> Result<Arc<T>> {
        self.entries
            .iter()
            .find(|e| e.name() == name)
            .cloned()
            .ok_or_else(|| Error::UnknownStrategy {
                kind: self.kind,
                name: name.to_string(),
                available: self.names().join(", "),
            })
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.iter().map(|e| e.name()).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Arc<T>> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

impl<T: ?Sized + Named> fmt::Debug for Registry<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Registry")
            .field("kind", &self.kind)
            .field("entries", &self.names())
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    trait Greeter: Named {
        fn greet(&self) -> String;
    }

    struct Hello(&'static str);

    impl Named for Hello {
        fn name(&self) -> &'static str {
            self.0
        }
    }

    impl Greeter for Hello {
        fn greet(&self) -> String {
            format!("hello from {}", self.0)
        }
    }

    #[test]
    fn lookup_by_name() {
        let reg = Registry::<dyn Greeter>::new("greeter")
            .with(Arc::new(Hello("a")))
            .with(Arc::new(Hello("b")));
        assert_eq!(reg.names(), vec!["a", "b"]);
        assert_eq!(reg.get("b").unwrap().greet(), "hello from b");
    }

    #[test]
    fn unknown_name_lists_alternatives() {
        let reg = Registry::<dyn Greeter>::new("greeter").with(Arc::new(Hello("a")));
        let err = reg.get("zzz").err().unwrap().to_string();
        assert!(err.contains("unknown greeter 'zzz'"), "{err}");
        assert!(err.contains("available: a"), "{err}");
    }

    #[test]
    fn re_registering_replaces() {
        let mut reg: Registry<dyn Greeter> = Registry::new("greeter");
        reg.register(Arc::new(Hello("a")));
        reg.register(Arc::new(Hello("a")));
        assert_eq!(reg.len(), 1);
    }
}
