pub mod abgroup;
pub mod mackey;
pub mod families;
pub mod grading;
pub mod cohomology;
pub mod cone;
