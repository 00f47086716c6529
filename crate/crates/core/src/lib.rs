pub mod adversary;
pub mod enumeration;
pub mod geometry;
pub mod graph;
pub mod rational;
pub mod rendezvous;
pub mod scenario;
