# Generated by Django 5.2.8 on 2026-10-18 09:12

import django.db.models.deletion
from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = [
    ]

    operations = [
        migrations.CreateModel(
            name='CensusRun',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('tetrahedra', models.PositiveSmallIntegerField()),
                ('mode', models.CharField(choices=[('conservative', 'Conservative'), ('aggressive', 'Aggressive')], default='aggressive', max_length=20)),
                ('require_non_orientable', models.BooleanField(default=True)),
                ('prune_low_degree_edges', models.BooleanField(default=True)),
                ('status', models.CharField(choices=[('running', 'Running'), ('completed', 'Completed'), ('failed', 'Failed')], default='running', max_length=20)),
                ('triangulation_count', models.IntegerField(default=0)),
                ('manifold_count', models.IntegerField(default=0)),
                ('review_count', models.IntegerField(default=0)),
                ('archive_path', models.CharField(blank=True, default='', max_length=500)),
                ('created_at', models.DateTimeField(auto_now_add=True)),
                ('updated_at', models.DateTimeField(auto_now=True)),
            ],
            options={
                'ordering': ['-created_at'],
                'indexes': [models.Index(fields=['tetrahedra', 'mode'], name='census_cens_tetrahe_5c1d0e_idx'), models.Index(fields=['-created_at'], name='census_cens_created_8a7f21_idx')],
            },
        ),
        migrations.CreateModel(
            name='CensusRecord',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('signature', models.CharField(db_index=True, max_length=255)),
                ('gluing_table', models.TextField()),
                ('invariants', models.JSONField(blank=True, null=True)),
                ('manifold_class', models.IntegerField(blank=True, null=True)),
                ('family_names', models.CharField(blank=True, default='', max_length=500)),
                ('status', models.CharField(choices=[('census', 'Census'), ('review', 'Review'), ('dropped', 'Dropped')], default='census', max_length=20)),
                ('reason', models.CharField(blank=True, default='', max_length=255)),
                ('created_at', models.DateTimeField(auto_now_add=True)),
                ('run', models.ForeignKey(on_delete=django.db.models.deletion.CASCADE, related_name='records', to='census.censusrun')),
            ],
            options={
                'ordering': ['signature'],
                'indexes': [models.Index(fields=['run', 'status'], name='census_cens_run_id_3e9b4a_idx')],
                'constraints': [models.UniqueConstraint(fields=('run', 'signature'), name='unique_run_signature')],
            },
        ),
    ]
