//! Versioned JSON envelope shared by every command.

use serde::Serialize;

use crate::input::InputInfo;

/// Bumped whenever a field is renamed or changes meaning.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Serialize)]
pub struct Envelope<T: Serialize> {
    pub schema_version: u32,
    pub command: &'static str,
    pub version: &'static str,
    pub input: InputInfo,
    #[serde(flatten)]
    pub body: T,
}

pub fn envelope<T: Serialize>(command: &'static str, input: InputInfo, body: T) -> Envelope<T> {
    Envelope {
        schema_version: SCHEMA_VERSION,
        command,
        version: env!("CARGO_PKG_VERSION"),
        input,
        body,
    }
}
