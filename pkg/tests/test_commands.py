import json
import os

import pytest


def dataset_args(files):
    content, cites = files
    return ['--dataset-content', content, '--dataset-cites', cites]


def train(runner, files, out, *extra):
    return runner.invoke(args=['train', *dataset_args(files), '--out', str(out), *extra])


class TestDatasetReport:

    def test_prints_counts_and_hash(self, runner, tiny_files):
        result = runner.invoke(args=['dataset-report', *dataset_args(tiny_files)])
        assert result.exit_code == 0, result.output
        assert '"nodes": 6' in result.output
        assert '"edges_kept": 7' in result.output
        assert '"sha256"' in result.output

    def test_missing_cites_file(self, runner, tiny_files, tmp_path):
        missing = str(tmp_path / 'nowhere.cites')
        result = runner.invoke(args=['dataset-report', '--dataset-content', tiny_files[0],
                                     '--dataset-cites', missing])
        assert result.exit_code == 2
        assert 'nowhere.cites' in result.output

    def test_unknown_dataset_name(self, runner):
        result = runner.invoke(args=['dataset-report', '--dataset', 'cora'])
        assert result.exit_code == 2
        assert 'does not exist' in result.output


class TestTrain:

    def test_writes_model_files_and_manifest(self, runner, tiny_files, tmp_path):
        result = train(runner, tiny_files, tmp_path / 'run')
        assert result.exit_code == 0, result.output
        for name in ('embeddings.txt', 'params.txt', 'words.txt', 'manifest.json'):
            assert (tmp_path / 'run' / name).exists()

        manifest = json.loads((tmp_path / 'run' / 'manifest.json').read_text())
        assert manifest['command'] == 'train'
        assert manifest['config']['DIM'] == 8
        assert manifest['run_config']['variant'] == 'gvnr_t'
        assert manifest['dataset']['report']['nodes'] == 6
        assert len(manifest['history']['epoch_losses']) == 3
        header = (tmp_path / 'run' / 'embeddings.txt').read_text().splitlines()[0]
        assert header == '6 16'

    def test_same_settings_same_bytes(self, runner, tiny_files, tmp_path):
        assert train(runner, tiny_files, tmp_path / 'a').exit_code == 0
        assert train(runner, tiny_files, tmp_path / 'b').exit_code == 0
        for name in ('embeddings.txt', 'params.txt', 'words.txt'):
            assert (tmp_path / 'a' / name).read_bytes() == (tmp_path / 'b' / name).read_bytes()

    def test_manifest_replays_the_run(self, runner, tiny_files, tmp_path):
        assert train(runner, tiny_files, tmp_path / 'a', '--variant', 'gvnr', '--dim', '5', '--seed', '3').exit_code == 0
        manifest = str(tmp_path / 'a' / 'manifest.json')
        result = runner.invoke(args=['train', '--config', manifest, '--out', str(tmp_path / 'b')])
        assert result.exit_code == 0, result.output
        assert (tmp_path / 'a' / 'embeddings.txt').read_bytes() == (tmp_path / 'b' / 'embeddings.txt').read_bytes()

    def test_flags_override_the_config_file(self, runner, tiny_files, tmp_path):
        settings = tmp_path / 'settings.json'
        settings.write_text(json.dumps({'DIM': 6, 'EPOCHS': 2}))
        assert train(runner, tiny_files, tmp_path / 'a', '--config', str(settings)).exit_code == 0
        assert train(runner, tiny_files, tmp_path / 'b', '--config', str(settings), '--dim', '4').exit_code == 0
        first = json.loads((tmp_path / 'a' / 'manifest.json').read_text())['run_config']['gvnr']
        second = json.loads((tmp_path / 'b' / 'manifest.json').read_text())['run_config']['gvnr']
        assert (first['dim'], first['epochs']) == (6, 2)
        assert (second['dim'], second['epochs']) == (4, 2)

    def test_invalid_dimension_is_a_usage_error(self, runner, tiny_files, tmp_path):
        result = train(runner, tiny_files, tmp_path / 'run', '--dim', '0')
        assert result.exit_code == 2
        assert 'Dimension must be at least 1.' in result.output

    def test_mode_of_the_other_variant(self, runner, tiny_files, tmp_path):
        result = train(runner, tiny_files, tmp_path / 'run', '--variant', 'gvnr', '--mode', 'full')
        assert result.exit_code == 2


class TestInfer:

    def test_embeds_every_document(self, runner, tiny_files, tmp_path):
        assert train(runner, tiny_files, tmp_path / 'run').exit_code == 0
        out = tmp_path / 'inferred.txt'
        result = runner.invoke(args=['infer', '--model', str(tmp_path / 'run'),
                                     '--dataset-content', tiny_files[0], '--out', str(out)])
        assert result.exit_code == 0, result.output
        lines = out.read_text().splitlines()
        assert [line.split()[0] for line in lines] == ['p1', 'p2', 'p3', 'p4', 'p5', 'p6']
        assert all(len(line.split()) == 9 for line in lines)

    def test_needs_a_text_model(self, runner, tiny_files, tmp_path):
        assert train(runner, tiny_files, tmp_path / 'run', '--variant', 'gvnr').exit_code == 0
        result = runner.invoke(args=['infer', '--model', str(tmp_path / 'run'),
                                     '--dataset-content', tiny_files[0]])
        assert result.exit_code == 1
        assert 'gvnr_t' in result.output


class TestEvaluate:

    def test_classify(self, runner, tiny_files, tmp_path):
        out = tmp_path / 'reports'
        result = runner.invoke(args=['evaluate', 'classify', *dataset_args(tiny_files),
                                     '--repeats', '1', '--fracs', '0.5', '--out', str(out)])
        assert result.exit_code == 0, result.output
        assert '% of training data' in result.output
        payload = json.loads((out / 'classification.json').read_text())
        assert payload['metric'] == 'accuracy'
        assert payload['options']['CLASSIFY_FRACTIONS'] == '0.5'
        assert payload['settings'][0]['setting'] == 0.5
        assert (out / 'classification.txt').exists()

    def test_bag_of_words_baseline(self, runner, tiny_files, tmp_path):
        out = tmp_path / 'reports'
        result = runner.invoke(args=['evaluate', 'classify', *dataset_args(tiny_files), '--features', 'bow',
                                     '--repeats', '1', '--fracs', '0.5', '--out', str(out)])
        assert result.exit_code == 0, result.output
        assert json.loads((out / 'bow_baseline.json').read_text())['method'] == 'bag-of-words'

    def test_existing_embeddings(self, runner, tiny_files, tmp_path):
        assert train(runner, tiny_files, tmp_path / 'run').exit_code == 0
        out = tmp_path / 'reports'
        result = runner.invoke(args=['evaluate', 'classify', *dataset_args(tiny_files),
                                     '--embeddings', str(tmp_path / 'run' / 'embeddings.txt'),
                                     '--repeats', '1', '--fracs', '0.5', '--out', str(out)])
        assert result.exit_code == 0, result.output
        assert json.loads((out / 'classification.json').read_text())['config']['dim'] == 16

    def test_fraction_outside_the_unit_interval(self, runner, tiny_files, tmp_path):
        result = runner.invoke(args=['evaluate', 'classify', *dataset_args(tiny_files),
                                     '--fracs', '0.5,1.5', '--out', str(tmp_path)])
        assert result.exit_code == 2

    def test_unknown_protocol(self, runner):
        result = runner.invoke(args=['evaluate', 'cluster'])
        assert result.exit_code == 2

    def test_unseen_documents(self, runner, planted_files, tmp_path):
        out = tmp_path / 'reports'
        result = runner.invoke(args=['evaluate', 'unseen', *dataset_args(planted_files),
                                     '--repeats', '1', '--fracs', '0.5', '--out', str(out)])
        assert result.exit_code == 0, result.output
        payload = json.loads((out / 'unseen_documents.json').read_text())
        assert payload['method'] == 'GVNR-t'
        assert payload['settings'][0]['repeats'] == 1

    def test_unseen_documents_need_text(self, runner, tiny_files, tmp_path):
        result = runner.invoke(args=['evaluate', 'unseen', *dataset_args(tiny_files), '--variant', 'gvnr',
                                     '--repeats', '1', '--fracs', '0.5', '--out', str(tmp_path)])
        assert result.exit_code == 1
        assert 'gvnr_t' in result.output

    def test_link_prediction(self, runner, planted_files, tmp_path):
        out = tmp_path / 'reports'
        result = runner.invoke(args=['evaluate', 'linkpred', *dataset_args(planted_files),
                                     '--test-frac', '0.3', '--repeats', '1', '--out', str(out)])
        assert result.exit_code == 0, result.output
        payload = json.loads((out / 'link_prediction.json').read_text())
        assert payload['metric'] == 'auc'
        assert payload['options']['TEST_FRAC'] == 0.3

    def test_link_prediction_for_hidden_nodes(self, runner, planted_files, tmp_path):
        out = tmp_path / 'reports'
        result = runner.invoke(args=['evaluate', 'linkpred', *dataset_args(planted_files),
                                     '--hide-frac', '0.34', '--repeats', '1', '--out', str(out)])
        assert result.exit_code == 0, result.output
        assert (out / 'unseen_link_prediction.json').exists()


class TestAttend:

    @pytest.fixture
    def text_model(self, runner, tiny_files, tmp_path):
        assert train(runner, tiny_files, tmp_path / 'run').exit_code == 0
        return str(tmp_path / 'run')

    def test_named_pair(self, runner, tiny_files, text_model, tmp_path):
        out = tmp_path / 'attention.jsonl'
        result = runner.invoke(args=['attend', '--model', text_model, *dataset_args(tiny_files),
                                     '--pair', 'p1', 'p4', '--out', str(out)])
        assert result.exit_code == 0, result.output
        record = json.loads(out.read_text())
        assert (record['doc_a'], record['doc_b']) == ('p1', 'p4')
        assert sum(entry['weight'] for entry in record['words_a']) == pytest.approx(1.0)
        assert [entry['token'] for entry in record['words_a']] == ['0', '1']

    def test_linked_pairs(self, runner, tiny_files, text_model, tmp_path):
        out = tmp_path / 'attention.jsonl'
        result = runner.invoke(args=['attend', '--model', text_model, *dataset_args(tiny_files),
                                     '--linked', '2', '--out', str(out)])
        assert result.exit_code == 0, result.output
        assert len(out.read_text().splitlines()) == 2

    def test_needs_pairs(self, runner, tiny_files, text_model):
        result = runner.invoke(args=['attend', '--model', text_model, *dataset_args(tiny_files)])
        assert result.exit_code == 2

    def test_unknown_document(self, runner, tiny_files, text_model):
        result = runner.invoke(args=['attend', '--model', text_model, *dataset_args(tiny_files),
                                     '--pair', 'p1', 'p9'])
        assert result.exit_code == 1
        assert 'p9' in result.output


@pytest.mark.cora
@pytest.mark.slow
def test_cora_report(runner, cora_files):
    result = runner.invoke(args=['dataset-report', *dataset_args(cora_files)])
    assert result.exit_code == 0, result.output
    assert '"nodes": 2708' in result.output
    assert '"num_classes": 7' in result.output
