// SPDX-License-Identifier: Apache-2.0

//! Hosts the `acceptance` test target. Kept in its own package, sorted after
//! the others, so a failing criterion does not stop cargo before the rest of
//! the workspace's tests have run.
