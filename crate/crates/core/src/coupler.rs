//! Full-simulation drivers (stub).
pub struct RunConfig; pub struct RunMode; pub struct RunResult; pub struct RunStatus;
