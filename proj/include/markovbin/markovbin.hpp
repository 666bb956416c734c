// Umbrella header.

#pragma once

#include "markovbin/alphabet.hpp"
#include "markovbin/binning.hpp"
#include "markovbin/chernoff.hpp"
#include "markovbin/contig.hpp"
#include "markovbin/fasta.hpp"
#include "markovbin/hypotest.hpp"
#include "markovbin/information.hpp"
#include "markovbin/joint_distribution.hpp"
#include "markovbin/markov_model.hpp"
#include "markovbin/optim.hpp"
#include "markovbin/random.hpp"
#include "markovbin/serialize.hpp"
#include "markovbin/simulate.hpp"
