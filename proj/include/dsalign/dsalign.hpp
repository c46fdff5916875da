#pragma once

#include "dsalign/derivation.hpp"
#include "dsalign/diagnostic.hpp"
#include "dsalign/dsl/format.hpp"
#include "dsalign/dsl/parse.hpp"
#include "dsalign/export.hpp"
#include "dsalign/itemset_io.hpp"
#include "dsalign/model.hpp"
#include "dsalign/report.hpp"
#include "dsalign/taxonomy.hpp"
#include "dsalign/validate.hpp"
