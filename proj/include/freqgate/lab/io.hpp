#pragma once

#include <span>
#include <string>

#include "freqgate/lab/apparatus.hpp"
#include "freqgate/lab/counting.hpp"
#include "freqgate/matrix_json.hpp"

namespace freqgate::lab {

/// mode,power,repeat; one row per lattice bin and spectrum. The repeat column
/// is the spectrum's position in `spectra`.
std::string spectra_csv(std::span<const Spectrum> spectra);

/// phi,mode,power,repeat over the window modes of `lattice`.
std::string fringe_csv(const FringeTrace& trace, const ModeLattice& lattice, int repeat = 0);

/// phi,mode,rate,std,expected,repeat. Rows with repeat -1 hold the
/// dark-subtracted mean; the others are raw per-repeat rates.
std::string counting_csv(const CountingScan& scan);

/// Matrix in the shared format plus the gauge convention and derived metrics.
json reconstruction_to_json(const ReconstructedMultiport& r);

}  // namespace freqgate::lab
