/* This file is part of gatecoh, a library for coherence budgets of
 * energy non-preserving gates.
 *
 * Distributed under the MIT license; see LICENSE for terms.
 */

#ifndef GATECOH_VERSION_HPP
#define GATECOH_VERSION_HPP

#define GATECOH_VERSION_MAJOR 1
#define GATECOH_VERSION_MINOR 0
#define GATECOH_VERSION_PATCH 0
#define GATECOH_VERSION_STRING "1.0.0"

namespace gatecoh {

/** Library version as "major.minor.patch"; echoed into every CLI output. */
inline const char* version_string() { return GATECOH_VERSION_STRING; }

} // namespace gatecoh

#endif // GATECOH_VERSION_HPP
