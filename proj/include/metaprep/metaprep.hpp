#pragma once

#include "metaprep/arff.hpp"
#include "metaprep/classifier.hpp"
#include "metaprep/classifiers.hpp"
#include "metaprep/common.hpp"
#include "metaprep/csv.hpp"
#include "metaprep/dataset.hpp"
#include "metaprep/evaluation.hpp"
#include "metaprep/folds.hpp"
#include "metaprep/forest.hpp"
#include "metaprep/metadb.hpp"
#include "metaprep/metafeatures.hpp"
#include "metaprep/openml.hpp"
#include "metaprep/ranker.hpp"
#include "metaprep/report.hpp"
#include "metaprep/synthetic.hpp"
#include "metaprep/transforms.hpp"
