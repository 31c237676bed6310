use std::collections::HashMap;

use super::PolyError;

/// Ordered list of variable names with a name → index lookup.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarTable {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

impl VarTable {
    pub fn new<S: Into<String>, I: IntoIterator<Item = S>>(names: I) -> Result<Self, PolyError> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        let mut index = HashMap::with_capacity(names.len());
        for (i, name) in names.iter().enumerate() {
            if name.is_empty() {
                return Err(PolyError::Parse("empty variable name".into()));
            }
            if index.insert(name.clone(), i).is_some() {
                return Err(PolyError::DuplicateVariable(name.clone()));
            }
        }
        Ok(VarTable { names, index })
    }

    pub fn arity(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }
}
