import { describe, expect, it } from 'vitest';

import { renderMetrics, type MetricsData } from '../src/metrics.js';

function data(): MetricsData {
  return {
    journalId: 'mat-sb',
    year: 2011,
    horizon: 2,
    impacts: [
      {
        journal_id: 'mat-sb', year: 2011, horizon: 2, mode: 'integral',
        citations: 130, citable_items: 160, defined: true, value: '13/16', rounded: '0.813',
      },
      {
        journal_id: 'mat-sb', year: 2011, horizon: 2, mode: 'restricted',
        citations: 85, citable_items: 150, defined: true, value: '17/30', rounded: '0.567',
      },
    ],
    report: {
      year: 2011,
      horizon: 2,
      rows: [
        {
          journal_id: 'mat-sb', journal: 'Matematicheskii Sbornik',
          integral_citations: '130', integral_if: '0.813',
          restricted_citations: '85', restricted_if: '0.567', error: null,
        },
        {
          journal_id: 'diskret-mat', journal: 'Diskretnaya Matematika',
          integral_citations: '43', integral_if: '0.483',
          restricted_citations: '--', restricted_if: '--', error: null,
        },
      ],
    },
  };
}

describe('metrics view', () => {
  it('renders payload numbers byte-identical, no client rounding', () => {
    const html = renderMetrics(data());
    expect(html).toContain('>0.813<');
    expect(html).toContain('>0.567<');
    expect(html).not.toContain('0.8125');
    expect(html).not.toContain('0.8130');
  });

  it('renders the dash literal for missing restricted values', () => {
    const html = renderMetrics(data());
    const row = html.slice(html.indexOf('data-journal="diskret-mat"'));
    expect(row).toContain('>--<');
  });

  it('renders an explicit empty state', () => {
    const html = renderMetrics({
      journalId: 'empty',
      year: 2011,
      horizon: 2,
      impacts: [
        {
          journal_id: 'empty', year: 2011, horizon: 2, mode: 'integral',
          citations: 0, citable_items: 0, defined: false, value: null, rounded: null,
        },
      ],
      report: { year: 2011, horizon: 2, rows: [] },
    });
    expect(html).toContain('no data');
  });
});
