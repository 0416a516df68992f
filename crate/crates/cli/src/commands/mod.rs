pub mod bench;
pub mod export;
pub mod generate;
pub mod profile;
pub mod slackdist;
pub mod solve;
pub mod verify;
