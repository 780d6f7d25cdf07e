#pragma once

#include "cosub/applications.hpp"
#include "cosub/atoms.hpp"
#include "cosub/error.hpp"
#include "cosub/filterbank.hpp"
#include "cosub/fourier.hpp"
#include "cosub/generators.hpp"
#include "cosub/graph.hpp"
#include "cosub/io.hpp"
#include "cosub/partition.hpp"
#include "cosub/spectral.hpp"
