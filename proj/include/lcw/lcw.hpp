#pragma once

#include "lcw/graph.hpp"
#include "lcw/poset.hpp"
#include "lcw/relstructure.hpp"
#include "lcw/tmodel.hpp"
#include "lcw/cotree.hpp"
#include "lcw/bicotree.hpp"
#include "lcw/splitdec.hpp"
#include "lcw/posetenc.hpp"
#include "lcw/anchor.hpp"
#include "lcw/folang.hpp"
#include "lcw/generate.hpp"
#include "lcw/report.hpp"
#include "lcw/suites.hpp"
