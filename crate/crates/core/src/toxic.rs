use std::fmt;

/// Setup secrets that must not outlive key generation.
///
/// Deliberately implements neither `Clone` nor any serialization trait, and
/// its `Debug` output is redacted. Values of this type are only handed out by
/// the `test-hooks` entry points.
pub struct Toxic<T>(T);

impl<T> Toxic<T> {
    #[allow(dead_code)]
    pub(crate) fn new(inner: T) -> Self {
        Toxic(inner)
    }

    pub fn expose(&self) -> &T {
        &self.0
    }
}

impl<T> fmt::Debug for Toxic<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Toxic(<redacted>)")
    }
}
