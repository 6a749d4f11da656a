""" Command-line interface: ``python -m reviewgraph <command> [options]``.

Commands run one pipeline stage each over the papers of a dataset manifest
(simulate, extract, classify, embed, build-graph), or train and score models
(train, evaluate, ablate), check gradients (gradcheck) and write a synthetic
dataset (synth).

Exit codes: 0 success, 1 usage, 2 endpoint failure, 3 data or validation
failure, 4 numeric failure during training, 5 gradient check failure.

"""

# -- Imports -----------------------------------------------------------------
import argparse
import json
import logging
import os
import sys
from concurrent.futures import ThreadPoolExecutor

from tabulate import tabulate

from reviewgraph import __version__
from reviewgraph.agents.debate import (
    load_paper, load_transcript, save_transcript, simulate_debate)
from reviewgraph.agents.embeddings import EmbeddingCache, embed_texts
from reviewgraph.agents.endpoint import HttpChatClient
from reviewgraph.agents.mock import MockClient
from reviewgraph.agents.pipeline import classify_dimensions, extract_triples
from reviewgraph.exceptions import (
    EmptySplit, EndpointError, GraphValidationError, NonFiniteGradient,
    NonFiniteLoss, ReviewGraphError)
from reviewgraph.extraction.builder import build_graph, opinion_keys
from reviewgraph.extraction.dimensions import (
    read_assignments, write_assignments)
from reviewgraph.extraction.triples import parse_triple_batch
from reviewgraph.graph.ablation import apply_ablation
from reviewgraph.graph.debate import DebateGraph
from reviewgraph.graph.io import load_graph, save_graph
from reviewgraph.graph.schema import AblationMode, Dimension
from reviewgraph.manifest import (
    DatasetManifest, ManifestRecord, load_manifest)
from reviewgraph.model.config import ModelConfig
from reviewgraph.model.hgt import (
    graph_loss, init_params, label_index, node_embedding_matrix)
from reviewgraph.numerics.gradcheck import grad_check_report
from reviewgraph.project import RunConfig, load_run_config
from reviewgraph.synthetic import SyntheticGenerator, random_debate_graph
from reviewgraph.training.checkpoint import load_checkpoint, save_checkpoint
from reviewgraph.training.metrics import evaluate
from reviewgraph.training.stats import welch_t_test
from reviewgraph.training.trainer import (
    evaluate_split, predict_labels, train, write_history)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_ENDPOINT = 2
EXIT_DATA = 3
EXIT_NUMERIC = 4
EXIT_GRADCHECK = 5

GRADCHECK_TOLERANCE = 1e-4


class UsageError(Exception):
    pass


class GradCheckFailed(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """ Argument parser that exits with the usage code 1. """

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, '{}: error: {}\n'.format(self.prog, message))


# -- Shared helpers ----------------------------------------------------------

def _client(run, args):
    if args.mock or run.endpoint.base_url == 'mock':
        return MockClient(run.seed, config=run.endpoint)
    return HttpChatClient(run.endpoint)


def _manifest(run, args):
    path = args.manifest or run.path('manifest')
    if not os.path.exists(path):
        raise UsageError("Manifest {!r} does not exist.".format(path))
    return load_manifest(path), path


def _for_each(records, fn, jobs):
    """ Run ``fn`` per record, up to ``jobs`` at once; results keep the
    record order.

    """
    if jobs <= 1:
        return [fn(r) for r in records]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, records))


def _title(manifest, record):
    if record.title:
        return record.title
    paper = manifest.path(record, 'paper')
    if paper and os.path.exists(paper):
        return load_paper(paper, record.paper_id).title
    return record.paper_id


def _require(manifest, record, key):
    path = manifest.path(record, key)
    if path is None or not os.path.exists(path):
        raise FileNotFoundError("Paper '{}' has no {} file ({!r})."
                                "".format(record.paper_id, key, path))
    return path


def _read(path):
    with open(path, 'r', encoding='utf-8') as f:
        return f.read()


def _write(path, text):
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, 'w', encoding='utf-8') as f:
        f.write(text)


def _fresh(path, force):
    return force or not os.path.exists(path)


# -- Pipeline stages ---------------------------------------------------------

def cmd_simulate(args, run, client):
    manifest, mpath = _manifest(run, args)

    def work(record):
        out = manifest.default_path(record, 'transcript', 'transcripts')
        if not _fresh(out, args.force):
            return 0
        paper = load_paper(_require(manifest, record, 'paper'),
                           record.paper_id)
        os.makedirs(os.path.dirname(out), exist_ok=True)
        save_transcript(simulate_debate(paper, client), out)
        return 1

    try:
        written = _for_each(manifest.records, work, run.jobs)
    finally:
        manifest.save(mpath)
    print('simulate: {} transcript(s) written'.format(sum(written)))


def cmd_extract(args, run, client):
    manifest, mpath = _manifest(run, args)

    def work(record):
        out = manifest.default_path(record, 'triples', 'triples')
        if not _fresh(out, args.force):
            return 0
        transcript = load_transcript(_require(manifest, record,
                                              'transcript'))
        _write(out, extract_triples(transcript, client).to_json() + '\n')
        return 1

    try:
        written = _for_each(manifest.records, work, run.jobs)
    finally:
        manifest.save(mpath)
    print('extract: {} triple file(s) written'.format(sum(written)))


def _triples(manifest, record):
    return parse_triple_batch(_read(_require(manifest, record, 'triples')),
                              record.paper_id)


def cmd_classify(args, run, client):
    manifest, mpath = _manifest(run, args)

    def work(record):
        out = manifest.default_path(record, 'dimensions', 'dimensions',
                                    '.jsonl')
        if not _fresh(out, args.force):
            return 0
        dims = classify_dimensions(_triples(manifest, record), client,
                                   jobs=run.jobs)
        os.makedirs(os.path.dirname(out), exist_ok=True)
        write_assignments(dims, out)
        return 1

    try:
        written = _for_each(manifest.records, work, 1)
    finally:
        manifest.save(mpath)
    print('classify: {} dimension file(s) written'.format(sum(written)))


def cmd_embed(args, run, client):
    manifest, mpath = _manifest(run, args)
    cache = EmbeddingCache(run.path('embedding_cache'))

    written = 0
    try:
        for record in manifest.records:
            out = manifest.default_path(record, 'embeddings', 'embeddings',
                                        '.jsonl')
            if not _fresh(out, args.force):
                continue
            texts = [_title(manifest, record)]
            texts += [d.display_name for d in Dimension]
            texts += [t for _, t in opinion_keys(_triples(manifest, record))]
            embed_texts(texts, client, cache=cache, jobs=run.jobs)
            os.makedirs(os.path.dirname(out), exist_ok=True)
            cache.subset(texts).save(out)
            written += 1
    finally:
        manifest.save(mpath)
    print('embed: {} embedding file(s) written'.format(written))


def cmd_build_graph(args, run, client=None):
    manifest, mpath = _manifest(run, args)
    failures, written = [], 0
    for record in manifest.records:
        out = manifest.default_path(record, 'graph', 'graphs')
        if not _fresh(out, args.force):
            continue
        try:
            g = build_graph(_title(manifest, record),
                            _triples(manifest, record),
                            read_assignments(_require(manifest, record,
                                                      'dimensions')),
                            label=record.label, ablation=run.ablation)
        except (ReviewGraphError, ValueError, OSError) as err:
            failures.append('{}: {}'.format(record.paper_id, err))
            continue
        os.makedirs(os.path.dirname(out), exist_ok=True)
        save_graph(g, out)
        written += 1
    manifest.save(mpath)
    if failures:
        raise GraphValidationError(failures)
    print('build-graph: {} graph(s) written ({})'.format(
        written, run.ablation.value))


# -- Loading splits ----------------------------------------------------------

def _relabel(g, label):
    if g.label == label:
        return g
    if g.label is not None:
        raise ValueError("Graph '{}' is labeled '{}' but the manifest says "
                         "'{}'.".format(g.graph_id, g.label, label))
    return DebateGraph(g.graph_id, g.nodes, g.edges, label=label,
                       ablations=g.ablations, id_map=g.id_map)


def load_split(manifest, name, ablation=AblationMode.FULL):
    """ ``(graph, embeddings)`` pairs of one manifest split, with the
    ablation applied.

    Raises:
        FileNotFoundError: Naming the paper whose graph is missing.
    """
    caches, out = {}, []
    for record in manifest.split(name):
        g = _relabel(load_graph(_require(manifest, record, 'graph')),
                     record.label)
        epath = _require(manifest, record, 'embeddings')
        if epath not in caches:
            caches[epath] = EmbeddingCache(epath)
        h = apply_ablation(g, ablation)
        out.append((h, node_embedding_matrix(h, caches[epath])))
    return out


def _input_dim(split):
    return int(split[0][1].shape[1])


def _train_splits(args, run):
    manifest, _ = _manifest(run, args)
    try:
        manifest.require_splits(['train', 'val'])
    except EmptySplit as err:
        raise UsageError(str(err))
    return manifest


# -- Training commands -------------------------------------------------------

def cmd_train(args, run, client=None):
    manifest = _train_splits(args, run)
    train_set = load_split(manifest, 'train', run.ablation)
    val_set = load_split(manifest, 'val', run.ablation)

    model_config = run.model_config(_input_dim(train_set))
    checkpoint, history = train(train_set, val_set, model_config,
                                run.train_config())
    train_accuracy = evaluate_split(train_set, checkpoint.params).accuracy

    os.makedirs(run.path('work_dir'), exist_ok=True)
    save_checkpoint(checkpoint, run.path('checkpoint'))
    write_history(history, run.path('history'))
    if run.path('history_plot'):
        from reviewgraph.viz import HistoryPlot
        HistoryPlot(history, filename=run.path('history_plot'),
                    title='Training history ({})'.format(
                        run.ablation.value)).draw()
    print('train: best epoch {}, best val macro-F1 {:.4f}, train accuracy '
          '{:.4f}, epochs run {}'.format(checkpoint.epoch,
                                        checkpoint.best_val_f1,
                                        train_accuracy, len(history)))


def _short(report):
    return {'acc': report.accuracy, 'p': report.macro_precision,
            'r': report.macro_recall, 'f1': report.macro_f1}


def cmd_evaluate(args, run, client=None):
    manifest, _ = _manifest(run, args)
    checkpoint = load_checkpoint(args.checkpoint or run.path('checkpoint'))
    ablation = run.ablation
    if checkpoint.model_config.homogeneous:
        ablation = AblationMode.HOMOGENEOUS
    split = load_split(manifest, args.split, ablation)
    if not split:
        raise EmptySplit("The manifest has no '{}' papers.".format(args.split))

    preds = predict_labels(split, checkpoint.params)
    golds = [label_index(g.label) for g, _ in split]
    report = evaluate(preds, golds)

    if args.compare:
        with open(args.compare, 'r', encoding='utf-8') as f:
            other = json.load(f)
        ours = [float(p == y) for p, y in zip(preds, golds)]
        missing = [g.graph_id for g, _ in split if g.graph_id not in other]
        if missing:
            raise ValueError("Comparison file lacks paper(s) {}."
                             "".format(missing))
        theirs = [float(other[g.graph_id]) for g, _ in split]
        report.ttest = welch_t_test(ours, theirs)

    logger.info("Evaluation on '%s':\n%s", args.split, report.table())
    if run.path('report'):
        _write(run.path('report'), json.dumps(
            dict(report.to_dict(), split=args.split), indent=1,
            default=float) + '\n')
    print(json.dumps(_short(report), sort_keys=False))


def cmd_ablate(args, run, client=None):
    manifest = _train_splits(args, run)
    eval_split = 'test' if manifest.split('test') else 'val'
    rows, records = [], []
    for mode in AblationMode:
        train_set = load_split(manifest, 'train', mode)
        val_set = load_split(manifest, 'val', mode)
        test_set = load_split(manifest, eval_split, mode)
        checkpoint, _ = train(train_set, val_set,
                              run.model_config(_input_dim(train_set), mode),
                              run.train_config())
        report = evaluate_split(test_set, checkpoint.params)
        rows.append([mode.value] + report.as_row())
        records.append(dict(_short(report), mode=mode.value,
                            epoch=checkpoint.epoch))
        logger.info("Ablation %s: %s", mode.value, report.as_row())

    table = tabulate(rows, headers=['Mode', 'Acc', 'P', 'R', 'F1'],
                     tablefmt='pipe', floatfmt='.2f')
    _write(os.path.join(run.path('work_dir'), 'ablation.md'), table + '\n')
    _write(os.path.join(run.path('work_dir'), 'ablation.json'),
           json.dumps({'split': eval_split, 'rows': records}, indent=1)
           + '\n')
    print(table)


def gradcheck_config(seed=0):
    """ The small model used by the gradient check. """
    return ModelConfig(hidden_dim=4, num_heads=2, input_dim=4, ffn_hidden=4,
                       num_layers=2, seed=seed)


def cmd_gradcheck(args, run, client=None):
    config = gradcheck_config(run.seed)
    g, x = random_debate_graph(run.seed, config.input_dim)
    params = init_params(config)
    report = grad_check_report(lambda p: graph_loss(g, x, p, g.label),
                               params)
    print('gradcheck: {}'.format(report))
    if not report.passed(GRADCHECK_TOLERANCE):
        raise GradCheckFailed("Gradient check failed: worst parameter '{}' "
                              "(relative error {:.3e})."
                              "".format(report.worst_param,
                                        report.max_rel_error))


def cmd_synth(args, run, client=None):
    out = args.out or run.path('work_dir')
    gen = SyntheticGenerator(seed=run.seed, label_signal=args.label_signal,
                             embedding_dim=args.embedding_dim)
    records = []
    for split, g, _ in gen.dataset(args.train, args.val, args.test):
        rel = os.path.join('graphs', g.graph_id + '.json')
        os.makedirs(os.path.join(out, 'graphs'), exist_ok=True)
        save_graph(g, os.path.join(out, rel))
        records.append(ManifestRecord(
            g.graph_id, split, g.label,
            {'graph': rel, 'embeddings': 'embeddings.jsonl'}))
    gen.cache.save(os.path.join(out, 'embeddings.jsonl'))
    manifest = DatasetManifest(records, root=out)
    manifest.save(os.path.join(out, 'manifest.jsonl'))
    print(manifest.table())


COMMANDS = {
    'simulate': cmd_simulate,
    'extract': cmd_extract,
    'classify': cmd_classify,
    'embed': cmd_embed,
    'build-graph': cmd_build_graph,
    'train': cmd_train,
    'evaluate': cmd_evaluate,
    'ablate': cmd_ablate,
    'gradcheck': cmd_gradcheck,
    'synth': cmd_synth,
}

# Commands that talk to the endpoint
_ENDPOINT_COMMANDS = {'simulate', 'extract', 'classify', 'embed'}


# -- Argument parsing --------------------------------------------------------

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', help='run configuration JSON file')
    common.add_argument('--seed', type=int, help='the single seed of the run')
    common.add_argument('--jobs', type=int, help='parallel requests')
    common.add_argument('--force', action='store_true',
                        help='redo stages whose outputs exist')
    common.add_argument('--ablation', choices=[m.value for m in AblationMode],
                        help='ablation mode')
    common.add_argument('--manifest', help='dataset manifest (JSON lines)')
    common.add_argument('--mock', action='store_true',
                        help='use the offline mock endpoint')
    common.add_argument('-v', '--verbose', action='store_true')

    parser = _Parser(prog='reviewgraph',
                     description='Reviewer-author debate graphs and a '
                                 'heterogeneous graph transformer for paper '
                                 'decision prediction.')
    parser.add_argument('--version', action='version',
                        version='%(prog)s {}'.format(__version__))
    sub = parser.add_subparsers(dest='command', metavar='command',
                                parser_class=_Parser)
    sub.required = True
    for name in ['simulate', 'extract', 'classify', 'embed', 'build-graph',
                 'train', 'ablate', 'gradcheck']:
        sub.add_parser(name, parents=[common])

    p = sub.add_parser('evaluate', parents=[common])
    p.add_argument('--checkpoint', help='checkpoint file')
    p.add_argument('--split', default='test',
                   choices=['train', 'val', 'test'])
    p.add_argument('--compare',
                   help='JSON {paper_id: 0|1} of another model, for a Welch '
                        't-test on per-paper correctness')

    p = sub.add_parser('synth', parents=[common])
    p.add_argument('--out', help='output directory')
    p.add_argument('--train', type=int, default=200)
    p.add_argument('--val', type=int, default=50)
    p.add_argument('--test', type=int, default=50)
    p.add_argument('--embedding-dim', type=int, default=16)
    p.add_argument('--label-signal', type=float, default=0.0)
    return parser


def _run_config(args):
    run = load_run_config(args.config) if args.config else \
        RunConfig(paths={'work_dir': os.getcwd()})
    overrides = {k: getattr(args, k) for k in ['seed', 'jobs', 'ablation']
                 if getattr(args, k) is not None}
    return run.replace(**overrides) if overrides else run


def main(argv=None, client=None):
    """ Entry point. Returns the exit code.

    Keyword Args:
        client: Chat/embedding client used instead of the configured one.
    """
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format='%(levelname)s %(name)s: %(message)s')

    try:
        run = _run_config(args)
        if client is None and args.command in _ENDPOINT_COMMANDS:
            client = _client(run, args)
        COMMANDS[args.command](args, run, client)
    except UsageError as err:
        print('usage error: {}'.format(err), file=sys.stderr)
        return EXIT_USAGE
    except EndpointError as err:
        print('endpoint error: {}'.format(err), file=sys.stderr)
        return EXIT_ENDPOINT
    except (NonFiniteLoss, NonFiniteGradient) as err:
        print('numeric failure: {}'.format(err), file=sys.stderr)
        return EXIT_NUMERIC
    except GradCheckFailed as err:
        print(str(err), file=sys.stderr)
        return EXIT_GRADCHECK
    except (ReviewGraphError, ValueError, OSError) as err:
        print('data error: {}'.format(err), file=sys.stderr)
        return EXIT_DATA
    return EXIT_OK


if __name__ == '__main__':
    sys.exit(main())
